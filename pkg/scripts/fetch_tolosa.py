"""Download the Tolosa matrices into $SPECRADIUS_DATA_DIR (or ./data).

    python scripts/fetch_tolosa.py [tols90 tols340 ...]
"""
import gzip
import os
import shutil
import sys
import urllib.request

BASE = "https://math.nist.gov/pub/MatrixMarket2/NEP/mvmtls/"
NAMES = ("tols90", "tols340", "tols1090", "tols2000", "tols4000")


def fetch(name, dest):
    target = os.path.join(dest, f"{name}.mtx")
    if os.path.exists(target):
        return target
    with urllib.request.urlopen(BASE + f"{name}.mtx.gz", timeout=60) as resp:
        with gzip.GzipFile(fileobj=resp) as gz, open(target, "wb") as out:
            shutil.copyfileobj(gz, out)
    return target


def main(argv):
    dest = os.environ.get("SPECRADIUS_DATA_DIR", "data")
    os.makedirs(dest, exist_ok=True)
    for name in argv or NAMES:
        print(fetch(name, dest))


if __name__ == "__main__":
    main(sys.argv[1:])
