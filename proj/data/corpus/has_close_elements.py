def has_close_elements(numbers, threshold):
    count = len(numbers)
    for i in range(count):
        first = numbers[i]
        for j in range(i + 1, count):
            second = numbers[j]
            distance = abs(first - second)
            if distance < threshold:
                return True
    return False
