def safe_divide(pairs):
    results = []
    failures = 0
    for numerator, denominator in pairs:
        try:
            quotient = numerator // denominator
        except ZeroDivisionError:
            failures += 1
            quotient = None
        results.append(quotient)
    summary = f"{failures} of {len(pairs)} failed"
    return (results, summary)
