def change_base(x, base):
    if x == 0:
        return "0"
    digits = []
    value = x
    negative = value < 0
    if negative:
        value = -value
    while value > 0:
        digits.append(str(value % base))
        value //= base
    text = "".join(reversed(digits))
    if negative:
        text = "-" + text
    return text
