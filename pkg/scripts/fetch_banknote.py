#!/usr/bin/env python3
"""Download the UCI banknote authentication dataset and write it as a
headered CSV at data/banknote.csv, ready for the acceptance suite and the
CLI. Needs direct network access to archive.ics.uci.edu."""
import os
import urllib.request

URL = ("https://archive.ics.uci.edu/ml/machine-learning-databases/00267/"
       "data_banknote_authentication.txt")
HEADER = "variance,skewness,curtosis,entropy,class\n"


def main():
    out_dir = os.path.join(os.path.dirname(__file__), "..", "data")
    os.makedirs(out_dir, exist_ok=True)
    out = os.path.join(out_dir, "banknote.csv")
    with urllib.request.urlopen(URL) as resp:
        body = resp.read().decode("ascii")
    rows = [r for r in body.splitlines() if r.strip()]
    if len(rows) != 1372:
        raise SystemExit(f"expected 1372 rows, got {len(rows)}")
    with open(out, "w") as fh:
        fh.write(HEADER)
        fh.write("\n".join(rows) + "\n")
    print(f"wrote {out} ({len(rows)} rows)")


if __name__ == "__main__":
    main()
