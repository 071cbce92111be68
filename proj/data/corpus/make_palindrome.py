def is_palindrome(text):
    return text == text[::-1]


def make_palindrome(text):
    if not text:
        return ""
    start = 0
    while not is_palindrome(text[start:]):
        start += 1
    prefix = text[:start]
    suffix = prefix[::-1]
    result = text + suffix
    return result
