def intersperse(numbers, delimiter):
    result = []
    if not numbers:
        return result
    last = len(numbers) - 1
    for index in range(last):
        result.append(numbers[index])
        result.append(delimiter)
    result.append(numbers[last])
    return result
