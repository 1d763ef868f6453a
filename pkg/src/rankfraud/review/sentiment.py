"""Sentence-level Naive Bayes sentiment tagging."""

from __future__ import annotations

from collections.abc import Sequence
from pathlib import Path

import numpy as np
import structlog
from pydantic import BaseModel, PrivateAttr
from sklearn.feature_extraction.text import CountVectorizer
from sklearn.model_selection import StratifiedKFold
from sklearn.naive_bayes import MultinomialNB

from rankfraud.config.defaults import DEFAULT_SENTIMENT_CORPUS
from rankfraud.core.errors import ValidationError
from rankfraud.learn.metrics import confusion
from rankfraud.types.evaluation import EvalReport, FoldResult
from rankfraud.utils.text import sentence_split, tokenize

logger = structlog.get_logger()

POSITIVE = 1
NEGATIVE = 0

_LABELS = {
    "+": POSITIVE,
    "pos": POSITIVE,
    "positive": POSITIVE,
    "1": POSITIVE,
    "-": NEGATIVE,
    "neg": NEGATIVE,
    "negative": NEGATIVE,
    "0": NEGATIVE,
}

LabeledSentence = tuple[str, int]


class SentimentModel(BaseModel):
    """Multinomial Naive Bayes over sentence tokens.

    Index 0 of the per-class arrays is negative, index 1 positive.
    """

    alpha: float
    vocabulary: list[str]
    class_log_prior: list[float]
    feature_log_prob: list[list[float]]

    _index: dict[str, int] | None = PrivateAttr(default=None)
    _flp: np.ndarray | None = PrivateAttr(default=None)

    def _arrays(self) -> tuple[dict[str, int], np.ndarray]:
        if self._index is None or self._flp is None:
            self._index = {tok: i for i, tok in enumerate(self.vocabulary)}
            self._flp = np.asarray(self.feature_log_prob, dtype=float)
        return self._index, self._flp

    def log_posteriors(self, sentence: str) -> np.ndarray:
        """Unnormalized class log-posteriors; unseen tokens are ignored."""
        index, flp = self._arrays()
        counts = np.zeros(len(self.vocabulary))
        for tok in tokenize(sentence):
            i = index.get(tok)
            if i is not None:
                counts[i] += 1
        return np.asarray(self.class_log_prior) + flp @ counts

    def is_positive(self, sentence: str) -> bool:
        neg, pos = self.log_posteriors(sentence)
        # Ties count as negative.
        return bool(pos > neg)

    def classify(self, sentence: str) -> int:
        return POSITIVE if self.is_positive(sentence) else NEGATIVE

    def sentence_shares(self, text: str) -> tuple[float, float]:
        """Percent of sentences tagged positive and negative; (0, 0) for empty text."""
        sentences = sentence_split(text)
        if not sentences:
            return 0.0, 0.0
        pos = sum(1 for s in sentences if self.is_positive(s))
        total = len(sentences)
        return 100.0 * pos / total, 100.0 * (total - pos) / total


def _vectorizer() -> CountVectorizer:
    return CountVectorizer(tokenizer=tokenize, lowercase=False, token_pattern=None)


def train_sentiment(corpus: Sequence[LabeledSentence], alpha: float = 1.0) -> SentimentModel:
    labels = {label for _, label in corpus}
    if labels != {POSITIVE, NEGATIVE}:
        raise ValidationError(f"Sentiment corpus needs both classes, got {sorted(labels)}")

    texts = [s for s, _ in corpus]
    y = np.asarray([label for _, label in corpus])
    vec = _vectorizer()
    counts = vec.fit_transform(texts)
    nb = MultinomialNB(alpha=alpha)
    nb.fit(counts, y)

    model = SentimentModel(
        alpha=alpha,
        vocabulary=[str(t) for t in vec.get_feature_names_out()],
        class_log_prior=[float(v) for v in nb.class_log_prior_],
        feature_log_prob=[[float(v) for v in row] for row in nb.feature_log_prob_],
    )
    logger.debug("sentiment.trained", sentences=len(texts), vocabulary=len(model.vocabulary))
    return model


def load_sentiment_corpus(path: str | Path | None = None) -> list[LabeledSentence]:
    """Read ``label<TAB>sentence`` lines; '#' lines and blanks are skipped."""
    out: list[LabeledSentence] = []
    source = Path(path or DEFAULT_SENTIMENT_CORPUS)
    for lineno, raw in enumerate(source.read_text(encoding="utf-8").splitlines(), 1):
        if not raw.strip() or raw.startswith("#"):
            continue
        label, sep, sentence = raw.partition("\t")
        key = label.strip().lower()
        if not sep or key not in _LABELS:
            raise ValidationError(f"{source}:{lineno}: expected '<label>\\t<sentence>'")
        out.append((sentence.strip(), _LABELS[key]))
    return out


def evaluate_sentiment(corpus: Sequence[LabeledSentence], alpha: float = 1.0, k: int = 10, seed: int = 0) -> EvalReport:
    """Stratified k-fold evaluation; positive sentiment is the positive class."""
    y = np.asarray([label for _, label in corpus])
    folds: list[FoldResult] = []
    splitter = StratifiedKFold(n_splits=k, shuffle=True, random_state=seed)
    for i, (train_idx, test_idx) in enumerate(splitter.split(np.zeros(len(y)), y)):
        model = train_sentiment([corpus[j] for j in train_idx], alpha)
        pred = [model.classify(corpus[j][0]) for j in test_idx]
        folds.append(FoldResult(fold=i, test_size=len(test_idx), confusion=confusion(y[test_idx], pred)))
    total = folds[0].confusion
    for f in folds[1:]:
        total = total + f.confusion
    report = EvalReport(task="sentiment", learner="naive-bayes", k=k, seed=seed, n=len(y), folds=folds, confusion=total)
    logger.info("sentiment.evaluated", fnr=round(report.fnr, 2), fpr=round(report.fpr, 2))
    return report
