def parse_nested_parens(text):
    depths = []
    for group in text.split(" "):
        if not group:
            continue
        depth = 0
        deepest = 0
        for ch in group:
            if ch == "(":
                depth += 1
                deepest = max(deepest, depth)
            else:
                depth -= 1
        depths.append(deepest)
    return depths
