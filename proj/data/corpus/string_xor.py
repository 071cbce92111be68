def string_xor(left, right):
    bits = []
    length = min(len(left), len(right))
    for index in range(length):
        a = left[index]
        b = right[index]
        if a == b:
            bits.append("0")
        else:
            bits.append("1")
    result = "".join(bits)
    return result
