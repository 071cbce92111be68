def all_prefixes(text):
    prefixes = []
    current = ""
    for ch in text:
        current = current + ch
        prefixes.append(current)
    total = 0
    for prefix in prefixes:
        total += len(prefix)
    return (prefixes, total)
