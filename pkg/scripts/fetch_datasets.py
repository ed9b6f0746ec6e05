#!/usr/bin/env python3
"""Download the signed-network fixtures G1-G9 and store them as edge lists.

The networks are published as a figshare collection. Every downloadable file
is converted with ``frustration.datasets.convert`` and kept only when its
(n, m, m-) matches one of the reference rows, so a mislabelled or partial
file is never installed under a fixture name.

    python3 scripts/fetch_datasets.py [--out data] [--article 5700832]
    python3 scripts/fetch_datasets.py --from-dir ~/Downloads/signed   # offline
"""

import argparse
import io
import json
import sys
import urllib.request
import zipfile
from pathlib import Path

from frustration.datasets import REFERENCE, convert
from frustration.sgraph import format_edge_list

API = "https://api.figshare.com/v2/articles/{}"


def _get(url: str) -> bytes:
    with urllib.request.urlopen(url, timeout=60) as resp:
        return resp.read()


def _texts(name: str, blob: bytes):
    """Yield (name, text) for a file or each member of a zip archive."""
    if name.endswith(".zip"):
        with zipfile.ZipFile(io.BytesIO(blob)) as zf:
            for member in zf.namelist():
                if not member.endswith("/"):
                    yield from _texts(member, zf.read(member))
        return
    try:
        yield name, blob.decode("utf-8")
    except UnicodeDecodeError:
        yield name, blob.decode("latin-1")


def _match(G):
    for ref in REFERENCE.values():
        if (G.n, G.m, G.m_minus) == (ref.n, ref.m, ref.m_minus):
            return ref
    return None


def install(files, out: Path) -> dict:
    out.mkdir(parents=True, exist_ok=True)
    found = {}
    for name, text in files:
        try:
            G = convert(text)
        except ValueError as exc:
            print(f"skip {name}: {exc}", file=sys.stderr)
            continue
        ref = _match(G)
        if ref is None:
            print(f"skip {name}: n={G.n} m={G.m} m-={G.m_minus} matches no fixture", file=sys.stderr)
            continue
        comments = [f"{ref.name}: {ref.description}", f"source file: {name}",
                    f"n={G.n} m={G.m} m_minus={G.m_minus} reference L={ref.L}"]
        (out / f"{ref.name}.txt").write_text(format_edge_list(G, comments))
        found[ref.name] = name
        print(f"{ref.name} <- {name}")
    return found


def main(argv=None) -> int:
    p = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("--out", default=str(Path(__file__).resolve().parents[1] / "data"))
    p.add_argument("--article", default="5700832")
    p.add_argument("--from-dir", help="convert files already downloaded into this directory")
    args = p.parse_args(argv)

    if args.from_dir:
        files = (t for f in sorted(Path(args.from_dir).rglob("*")) if f.is_file()
                 for t in _texts(f.name, f.read_bytes()))
    else:
        try:
            meta = json.loads(_get(API.format(args.article)))
            files = [t for f in meta.get("files", []) for t in _texts(f["name"], _get(f["download_url"]))]
        except OSError as exc:
            print(f"download failed: {exc}; fetch the files by hand and use --from-dir", file=sys.stderr)
            return 1
    found = install(files, Path(args.out))
    missing = sorted(set(REFERENCE) - set(found))
    if missing:
        print(f"not found: {', '.join(missing)}", file=sys.stderr)
    return 0 if found else 1


if __name__ == "__main__":
    sys.exit(main())
