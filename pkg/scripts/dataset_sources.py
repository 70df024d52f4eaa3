"""List public sources for the benchmark datasets and check which are present.

Nothing is downloaded. Fetch a file yourself, convert it to the CSV layout in
docs/dataset-format.md and save it under data/ with the name shown.
"""

import argparse
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1]

# name, expected shape (samples x features), assumed source
SOURCES = [
    ("ionosphere", "351 x 34", "UCI Machine Learning Repository, Ionosphere (id 52)",
     "https://archive.ics.uci.edu/dataset/52/ionosphere"),
    ("breast", "569 x 30", "UCI Breast Cancer Wisconsin (Diagnostic) (id 17)",
     "https://archive.ics.uci.edu/dataset/17/breast+cancer+wisconsin+diagnostic"),
    ("heart", "267 x 44", "UCI SPECTF Heart (id 96), train and test files concatenated",
     "https://archive.ics.uci.edu/dataset/96/spectf+heart"),
    ("sonar", "208 x 60", "UCI Connectionist Bench (Sonar, Mines vs. Rocks) (id 151)",
     "https://archive.ics.uci.edu/dataset/151/connectionist+bench+sonar+mines+vs+rocks"),
    ("ovarian", "216 x 4000", "ovarian cancer mass-spectrometry demo set shipped with MATLAB (ovariancancer.mat)",
     "https://www.mathworks.com/help/stats/sample-data-sets.html"),
    ("colon", "62 x 2000", "Alon et al. colon tumour microarray, e.g. the 'colon' set of the R package datamicroarray",
     "https://github.com/ramhiser/datamicroarray"),
]


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--data-dir", type=Path, default=ROOT / "data")
    args = parser.parse_args(argv)
    missing = 0
    for name, shape, source, url in SOURCES:
        path = args.data_dir / f"{name}.csv"
        status = "present" if path.exists() else "MISSING"
        missing += not path.exists()
        print(f"{name:<11}{shape:<12}{status:<9}{source}\n{'':<32}{url}")
    return 1 if missing else 0


if __name__ == "__main__":
    sys.exit(main())
