def get_positive(numbers):
    positive = []
    negative = 0
    for value in numbers:
        if value > 0:
            positive.append(value)
        elif value < 0:
            negative += 1
    ratio = 0.0
    if numbers:
        ratio = len(positive) / len(numbers)
    return (positive, negative, round(ratio, 4))
