def find_closest_elements(numbers):
    best = None
    gap = None
    ordered = sorted(numbers)
    for index in range(1, len(ordered)):
        low = ordered[index - 1]
        high = ordered[index]
        current = high - low
        if gap is None or current < gap:
            gap = current
            best = (low, high)
    return best
