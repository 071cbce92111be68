def count_distinct_characters(text):
    seen = set()
    order = []
    for ch in text.lower():
        if ch.isalpha() and ch not in seen:
            seen.add(ch)
            order.append(ch)
    count = len(seen)
    first = order[0] if order else ""
    return (count, first)
