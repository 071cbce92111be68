def sort_third(values):
    result = list(values)
    picked = []
    for index in range(0, len(result), 3):
        picked.append(result[index])
    picked.sort()
    position = 0
    for index in range(0, len(result), 3):
        result[index] = picked[position]
        position += 1
    return result
