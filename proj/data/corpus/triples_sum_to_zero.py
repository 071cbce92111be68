def triples_sum_to_zero(numbers):
    size = len(numbers)
    found = []
    for i in range(size):
        for j in range(i + 1, size):
            for k in range(j + 1, size):
                total = numbers[i] + numbers[j] + numbers[k]
                if total == 0:
                    found.append((numbers[i], numbers[j], numbers[k]))
    return (len(found) > 0, len(found))
