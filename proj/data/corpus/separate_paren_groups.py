def separate_paren_groups(text):
    groups = []
    current = []
    depth = 0
    for ch in text:
        if ch == "(":
            depth += 1
            current.append(ch)
        elif ch == ")":
            depth -= 1
            current.append(ch)
            if depth == 0:
                groups.append("".join(current))
                current = []
    return groups
