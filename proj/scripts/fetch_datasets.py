#!/usr/bin/env python3
"""Write the Wine and Breast Cancer (Wisconsin, diagnostic) datasets as CSV.

Uses the copies bundled with scikit-learn, so no network access is needed.
Usage: scripts/fetch_datasets.py [OUTPUT_DIR]   (default: data/)
"""
import pathlib
import sys

import pandas as pd
from sklearn.datasets import load_breast_cancer, load_wine


def write(bunch, path, label_column="label"):
    frame = pd.DataFrame(bunch.data, columns=[str(c).replace(" ", "_") for c in bunch.feature_names])
    frame[label_column] = [str(bunch.target_names[t]) for t in bunch.target]
    frame.to_csv(path, index=False, float_format="%.10g")
    print(f"wrote {path} ({frame.shape[0]} rows, {frame.shape[1] - 1} features)")


def main():
    out = pathlib.Path(sys.argv[1] if len(sys.argv) > 1 else "data")
    out.mkdir(parents=True, exist_ok=True)
    write(load_wine(), out / "wine.csv")
    write(load_breast_cancer(), out / "breast_cancer.csv")


if __name__ == "__main__":
    main()
