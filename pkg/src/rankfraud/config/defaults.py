"""Default tables and shipped asset locations."""

from __future__ import annotations

from importlib.resources import files
from pathlib import Path

# Market install-count bucket boundaries. Bucket i is the half-open interval
# (BOUNDARIES[i], BOUNDARIES[i + 1]]. Rating and review counts are bucketized
# with the same table so install/rating ratios compare aligned endpoints.
DEFAULT_BUCKET_BOUNDARIES: list[int] = [
    0,
    1,
    5,
    10,
    50,
    100,
    500,
    1_000,
    5_000,
    10_000,
    50_000,
    100_000,
    500_000,
    1_000_000,
    5_000_000,
    10_000_000,
    50_000_000,
    100_000_000,
    500_000_000,
    1_000_000_000,
    5_000_000_000,
]

ASSETS_DIR = Path(str(files("rankfraud.assets")))

DEFAULT_PERMISSION_CATALOG = ASSETS_DIR / "permissions_api22.txt"
DEFAULT_MALWARE_LEXICON = ASSETS_DIR / "lexicons" / "malware.txt"
DEFAULT_FRAUD_LEXICON = ASSETS_DIR / "lexicons" / "fraud.txt"
DEFAULT_BENIGN_LEXICON = ASSETS_DIR / "lexicons" / "benign.txt"
DEFAULT_COERCIVE_KEYWORDS = ASSETS_DIR / "lexicons" / "coercive.txt"
DEFAULT_SENTIMENT_CORPUS = ASSETS_DIR / "sentiment_corpus.tsv"

# Reference counts of the indicator lexicons; loaded sizes are checked against these.
LEXICON_TARGET_SIZES: dict[str, int] = {
    "malware": 31,
    "fraud": 112,
    "benign": 105,
}

DANGEROUS_PERMISSION_TARGET = 47
