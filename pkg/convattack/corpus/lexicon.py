# Word lists the synthetic generator fills its templates from. The toy embedding
# table gives every word here a vector and every content word a family of variants.

NAMES = (
    "john", "mary", "susan", "david", "linda", "james", "karen", "robert", "nancy",
    "paul", "laura", "mark", "helen", "steven", "carol", "kevin", "sarah", "brian",
    "julie", "frank", "alice", "peter", "diane", "george", "emma", "henry", "grace",
    "oscar", "ruth", "victor",
)

NOUNS = (
    "car", "house", "dog", "boat", "bike", "garden", "kitchen", "piano", "laptop",
    "camera", "truck", "sofa", "jacket", "ticket", "guitar", "painting", "farm",
    "cabin", "horse", "puppy", "lamp", "clock", "phone", "radio", "tractor", "carpet",
    "desk", "oven", "fridge", "tent", "kayak", "trailer", "cottage", "scooter",
    "printer", "blender", "mirror", "fence", "wagon", "bicycle",
)

VERBS = (
    "bought", "sold", "fixed", "painted", "visited", "cleaned", "borrowed", "rented",
    "washed", "built", "moved", "found", "lost", "liked", "repaired", "stole",
    "delivered", "ordered", "watched", "drove", "shipped", "measured", "inspected",
    "decorated", "photographed", "insured",
)

ADJECTIVES = (
    "old", "new", "big", "small", "red", "blue", "cheap", "expensive", "broken",
    "shiny", "huge", "tiny", "green", "yellow", "heavy", "quiet", "noisy", "clean",
    "dirty", "fancy", "plain", "modern", "rusty", "wooden", "sturdy", "lovely",
    "strange", "famous", "bright", "dusty",
)

CONTENT_WORDS = NAMES + NOUNS + VERBS + ADJECTIVES

NEGATION = "never"

FUNCTION_WORDS = (
    "i", "think", "the", "a", "you", "know", "well", "that", "last", "week",
    "yesterday", "oh", "really", "yeah", "is", "nice", "see", "uh", "huh", "wow",
    "great", "right", "remember", "was", "there", "too", "and", "it", NEGATION,
)

FACT_TEMPLATES = (
    "{name} {verb} the {adj} {noun} .",
    "i think {name} {verb} the {adj} {noun} .",
    "you know , {name} {verb} a {adj} {noun} yesterday .",
    "well , {name} {verb} that {adj} {noun} last week .",
)

RESPONSES = (
    "oh really ?",
    "yeah , i know .",
    "that is nice .",
    "i see .",
    "uh huh .",
    "wow , that is great .",
    "right , i remember that .",
)

COMPANION_TEMPLATE = "and {name} was there too ."

HYPOTHESIS_TEMPLATES = (
    "{name} {verb} the {adj} {noun} .",
    "{name} {verb} the {noun} .",
    "{name} {verb} a {adj} {noun} .",
)

NEGATED_TEMPLATES = (
    "{name} never {verb} the {adj} {noun} .",
    "{name} never {verb} the {noun} .",
)

COMPANION_HYPOTHESIS = "{name} was there ."
