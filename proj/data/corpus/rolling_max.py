def rolling_max(numbers):
    running = None
    result = []
    for value in numbers:
        if running is None:
            running = value
        else:
            running = max(running, value)
        result.append(running)
    return result
