def largest_divisor(n):
    candidate = n - 1
    checks = 0
    while candidate > 1:
        checks += 1
        if n % candidate == 0:
            break
        candidate -= 1
    if candidate < 1:
        candidate = 1
    return (candidate, checks)
