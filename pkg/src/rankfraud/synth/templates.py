"""Review text pools for generated markets.

Honest text is keyed to the star rating. Fraud text comes from a separate,
near-duplicate pool. Injection pools carry the indicator words and coercive
phrases the detectors look for.
"""

from __future__ import annotations

import numpy as np

POSITIVE_SENTENCES = [
    "I love this app.",
    "Works great on my phone.",
    "Really easy to use.",
    "The new update is awesome.",
    "Very helpful for my daily routine.",
    "The interface is clean and simple.",
    "My kids enjoy it a lot.",
    "Smooth and reliable so far.",
    "Nice design and good features.",
    "The support team fixed my problem quickly.",
    "Fun levels and beautiful graphics.",
    "It saves me a lot of time.",
    "Thank you to the developers.",
    "Everything loads fast now.",
    "A handy little tool.",
    "Relaxing game after a long day.",
]

NEGATIVE_SENTENCES = [
    "It keeps crashing when I open it.",
    "Too many ads lately.",
    "The last update broke the login.",
    "It freezes on the loading screen.",
    "Support never answered my email.",
    "It drains my battery.",
    "Slow and buggy on my tablet.",
    "I lost my progress after the update.",
    "The menus are confusing.",
    "Not worth the download.",
    "Annoying notifications all day.",
    "The levels are impossible without paying.",
]

NEUTRAL_SENTENCES = [
    "It is okay for now.",
    "Does the job most of the time.",
    "Some features are missing.",
    "Could use a dark mode.",
]

POSITIVE_TITLES = ["Great app", "Love it", "Very good", "Nice", "Recommended", "Works well"]
NEUTRAL_TITLES = ["Okay", "Average", "Not bad", "Could be better"]
NEGATIVE_TITLES = ["Disappointed", "Crashes", "Needs work", "Bad update", "Uninstalled"]

# Campaign reviews: short superlatives in a fixed shape.
FRAUD_OPENERS = ["Best", "Awesome", "Amazing", "Great", "Perfect"]
FRAUD_SUBJECTS = ["app ever", "game ever", "app of the year", "app on the store", "game I ever played"]
FRAUD_CLOSERS = ["Must download!", "Everyone should install it!", "Highly recommended!", "Download now!", "Five stars!"]
FRAUD_TITLES = ["Best app", "Awesome", "Amazing", "Must have", "Perfect"]

MALWARE_SENTENCES = [
    "My phone got a virus right after installing it.",
    "It shows adware popups on my home screen.",
    "This is malware, it sends spam to my contacts.",
    "Looks like spyware, it asks for permissions it does not need.",
    "The antivirus flagged it as a trojan.",
    "Suspicious app, my account got hacked.",
]

FRAUD_COMPLAINTS = [
    "The ratings here are bogus, the reviewers are bots.",
    "All these five star ratings look planted.",
    "Do not trust the reviewers, they are paid shills.",
    "Misleading description and inflated ratings.",
]

COERCIVE_SENTENCES = [
    "I had to give five stars to unlock the next level.",
    "It asks for a review before you get free coins.",
    "You earn points only if you install other apps.",
    "The game says rate five stars for a reward.",
]


def _pick(rng: np.random.Generator, pool: list[str]) -> str:
    return pool[int(rng.integers(len(pool)))]


def honest_text(rng: np.random.Generator, rating: int) -> tuple[str, str]:
    """(title, text) of a genuine review with the given rating."""
    n = int(rng.integers(1, 4))
    if rating >= 4:
        title, pool = _pick(rng, POSITIVE_TITLES), POSITIVE_SENTENCES
        sentences = [_pick(rng, pool) for _ in range(n)]
    elif rating == 3:
        title = _pick(rng, NEUTRAL_TITLES)
        sentences = [_pick(rng, POSITIVE_SENTENCES), _pick(rng, NEUTRAL_SENTENCES), _pick(rng, NEGATIVE_SENTENCES)][:n]
    else:
        title, pool = _pick(rng, NEGATIVE_TITLES), NEGATIVE_SENTENCES
        sentences = [_pick(rng, pool) for _ in range(n)]
    return title, " ".join(dict.fromkeys(sentences))


def fraud_text(rng: np.random.Generator) -> tuple[str, str]:
    text = f"{_pick(rng, FRAUD_OPENERS)} {_pick(rng, FRAUD_SUBJECTS)}! {_pick(rng, FRAUD_CLOSERS)}"
    return _pick(rng, FRAUD_TITLES), text


def inject(rng: np.random.Generator, text: str, pool: list[str]) -> str:
    return f"{text} {_pick(rng, pool)}".strip()
