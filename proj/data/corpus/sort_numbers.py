def sort_numbers(text):
    names = ["zero", "one", "two", "three", "four",
             "five", "six", "seven", "eight", "nine"]
    values = {}
    for index, name in enumerate(names):
        values[name] = index
    words = [word for word in text.split(" ") if word]
    ordered = sorted(words, key=lambda word: values[word])
    result = " ".join(ordered)
    return result
