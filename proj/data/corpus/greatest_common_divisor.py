def greatest_common_divisor(a, b):
    first = abs(a)
    second = abs(b)
    steps = 0
    while second != 0:
        remainder = first % second
        first = second
        second = remainder
        steps += 1
    return (first, steps)
