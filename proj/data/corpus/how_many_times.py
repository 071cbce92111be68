def how_many_times(text, pattern):
    if not pattern:
        return 0
    count = 0
    width = len(pattern)
    limit = len(text) - width + 1
    for start in range(max(limit, 0)):
        window = text[start:start + width]
        if window == pattern:
            count += 1
    return count
