def remove_duplicates(numbers):
    counts = {}
    for value in numbers:
        counts[value] = counts.get(value, 0) + 1
    kept = []
    for value in numbers:
        if counts[value] == 1:
            kept.append(value)
    removed = len(numbers) - len(kept)
    return (kept, removed)
