def parse_music(score):
    lengths = {"o": 4, "o|": 2, ".|": 1}
    beats = []
    total = 0
    for note in score.split(" "):
        if note in lengths:
            value = lengths[note]
            beats.append(value)
            total += value
    return (beats, total)
