def flip_case(text):
    pieces = []
    changed = 0
    for ch in text:
        if ch.isupper():
            pieces.append(ch.lower())
            changed += 1
        elif ch.islower():
            pieces.append(ch.upper())
            changed += 1
        else:
            pieces.append(ch)
    return ("".join(pieces), changed)
