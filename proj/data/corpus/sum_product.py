def sum_product(numbers):
    total = 0
    product = 1
    for value in numbers:
        total = total + value
        product = product * value
    pair = (total, product)
    return pair
