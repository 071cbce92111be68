class Counter:
    def __init__(self):
        self.counts = {}

    def add(self, word):
        self.counts[word] = self.counts.get(word, 0) + 1


def word_stats(text):
    counter = Counter()
    longest = ""
    for raw in text.split():
        word = raw.strip(".,!?").lower()
        if not word:
            continue
        counter.add(word)
        if len(word) > len(longest):
            longest = word
    common = sorted(counter.counts.items(), key=lambda item: (-item[1], item[0]))
    top = common[0][0] if common else None
    return (len(counter.counts), top, longest)
