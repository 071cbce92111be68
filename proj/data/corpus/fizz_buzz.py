def fizz_buzz(n):
    count = 0
    for value in range(n):
        if value % 11 == 0 or value % 13 == 0:
            digits = str(value)
            for digit in digits:
                if digit == "7":
                    count += 1
    return count
