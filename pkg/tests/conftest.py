import json
import random
from pathlib import Path

import pytest

from priorscrub.lexicon import default_lexicon

FIXTURES = Path(__file__).parent / "fixtures"

# Vocabulary for building synthetic reports: none of these words (or any
# lexicon variant, phrase trigger, or comparative pair word) signal a prior
# reference, so detection on text built purely from them must be all-KEEP.
SAFE_WORDS = [
    "heart", "size", "normal", "lungs", "clear", "pneumothorax", "effusion",
    "consolidation", "opacity", "left", "right", "base", "apex", "mild",
    "moderate", "severe", "acute", "focal", "pleural", "costophrenic",
    "angle", "sharp", "silhouette", "contour", "within", "limits", "tube",
    "catheter", "tip", "carina", "above", "below", "seen", "noted",
    "without", "evidence", "process", "patchy", "atelectasis", "volumes",
    "low", "grossly", "unremarkable", "osseous", "abnormality", "visualized",
]

# Sentences with known prior references, used to build synthetic corpora
# with a controlled keyword load.
PRIOR_SENTENCES = [
    "Comparison made to prior study from ___.",
    "There is again seen moderate congestive heart failure with increased vascular cephalization, stable.",
    "There are large bilateral pleural effusions but decreased since previous.",
    "No significant interval change.",
    "The cardiomediastinal and hilar contours are unchanged.",
    "Right lung opacities have slightly worsened since previous exam.",
    "Findings remain worrisome for recurrent malignancy.",
    "Improved aeration at the left base.",
    "Persistent opacity at the right base has decreased in extent.",
    "There is redemonstration of a right pleural effusion, similar to earlier imaging.",
    "Interval removal of the right chest tube.",
]

QUALIFIED_CHANGE_SENTENCES = [
    "Emphysematous changes are identified.",
    "Midfoot degenerative changes.",
    "There are atherosclerotic changes of the aorta.",
    "Arthritic changes of the spine are present.",
    "Bony changes of renal osteodystrophy are noted.",
    "Degenerative changes in the spine.",
]


@pytest.fixture(scope="session")
def lexicon():
    return default_lexicon()


@pytest.fixture(scope="session")
def table_pairs():
    return json.loads((FIXTURES / "table_pairs.json").read_text())


@pytest.fixture(scope="session")
def corpus_records():
    records = []
    for line in (FIXTURES / "corpus.jsonl").read_text().splitlines():
        if line.strip():
            records.append(json.loads(line))
    return records


@pytest.fixture(scope="session")
def corpus_path():
    return str(FIXTURES / "corpus.jsonl")


def clean_sentence(rng: random.Random, length: int | None = None) -> str:
    n = length or rng.randint(3, 9)
    words = [rng.choice(SAFE_WORDS) for _ in range(n)]
    return " ".join(words).capitalize() + "."


def synthetic_clean_report(rng: random.Random, sentences: int | None = None) -> str:
    n = sentences or rng.randint(1, 4)
    return " ".join(clean_sentence(rng) for _ in range(n))
