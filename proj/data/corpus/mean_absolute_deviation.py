def mean_absolute_deviation(numbers):
    if not numbers:
        return 0.0
    total = 0.0
    for value in numbers:
        total += value
    mean = total / len(numbers)
    spread = 0.0
    for value in numbers:
        spread += abs(value - mean)
    result = spread / len(numbers)
    return round(result, 6)
