def is_prime(n):
    if n < 2:
        return False
    divisor = 2
    while divisor * divisor <= n:
        if n % divisor == 0:
            return False
        divisor += 1
    return True


def count_primes(limit):
    total = 0
    found = []
    for value in range(limit):
        if is_prime(value):
            total += 1
            found.append(value)
    return (total, found[-3:])
