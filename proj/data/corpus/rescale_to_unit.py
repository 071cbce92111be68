def rescale_to_unit(numbers):
    if len(numbers) < 2:
        return list(numbers)
    smallest = min(numbers)
    largest = max(numbers)
    width = largest - smallest
    if width == 0:
        return [0.0 for value in numbers]
    scaled = []
    for value in numbers:
        scaled.append(round((value - smallest) / width, 6))
    return scaled
