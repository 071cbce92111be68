def below_zero(operations):
    balance = 0
    lowest = 0
    for amount in operations:
        balance = balance + amount
        if balance < lowest:
            lowest = balance
    result = lowest < 0
    return result
