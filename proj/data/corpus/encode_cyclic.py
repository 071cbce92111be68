def encode_cyclic(text):
    groups = []
    for start in range(0, len(text), 3):
        groups.append(text[start:start + 3])
    rotated = []
    for group in groups:
        if len(group) == 3:
            rotated.append(group[1:] + group[0])
        else:
            rotated.append(group)
    result = "".join(rotated)
    return result
