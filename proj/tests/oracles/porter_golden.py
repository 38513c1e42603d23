"""Regenerates tests/fixtures/porter_golden.tsv.

The table is produced by NLTK's PorterStemmer in ORIGINAL_ALGORITHM mode,
an implementation independent of include/revsent/porter.hpp. Run once and
commit the output; the C++ tests only read the frozen file.
"""
import re
import sys
from pathlib import Path

from nltk.stem.porter import PorterStemmer

CLASSIC = """
caresses ponies ties caress cats feed agreed plastered bled motoring sing
conflated troubled sized hopping tanned falling hissing fizzed failing filing
happy sky relational conditional rational valenci hesitanci digitizer
conformabli radicalli differentli vileli analogousli vietnamization predication
operator feudalism decisiveness hopefulness callousness formaliti sensitiviti
sensibiliti triplicate formative formalize electriciti electrical hopeful
goodness revival allowance inference airliner gyroscopic adjustable defensible
irritant replacement adjustment dependent adoption homologou communism activate
angulariti homologous effective bowdlerize probate rate cease controll roll
generalizations oscillators walking ponds run beautiful gardens paths walk
around is as us a i news  sizes agreement abilities generously
""".split()

REVIEW_WORDS = """
visitors wandered along shaded walkways beside the ornamental lake while
children played happily near fountains gardeners trimmed hedges and flowering
borders several benches overlooked busy streets locals recommended relaxing
afternoons picnicking families photographed swans ducks herons conditional
generalization nationalism hopelessness usefulness organizational sensational
disappointing overcrowded unattended vandalised patrolled fenced closures
lovely peaceful clean relaxing stunning charming pleasant gorgeous tranquil
wonderful delightful scenic friendly spotless dirty crowded noisy unsafe smelly
rude littered filthy overpriced dangerous broken disappointing neglected boring
awful terrible horrible
"""


def main() -> None:
    words = list(CLASSIC)
    words += [w.lower() for w in re.findall(r"[A-Za-z]+", REVIEW_WORDS)]
    seen = []
    for w in words:
        if w not in seen:
            seen.append(w)
    stemmer = PorterStemmer(mode=PorterStemmer.ORIGINAL_ALGORITHM)
    out = Path(__file__).resolve().parents[1] / "fixtures" / "porter_golden.tsv"
    with out.open("w") as f:
        for w in seen:
            f.write(f"{w}\t{stemmer.stem(w, to_lowercase=False)}\n")
    print(f"wrote {len(seen)} rows to {out}", file=sys.stderr)


if __name__ == "__main__":
    main()
