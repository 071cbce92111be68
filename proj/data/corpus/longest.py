def longest(strings):
    if not strings:
        return None
    best = strings[0]
    best_length = len(best)
    for candidate in strings:
        size = len(candidate)
        if size > best_length:
            best = candidate
            best_length = size
    return best
