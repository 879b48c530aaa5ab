"""Regenerate the frozen oracle outputs in tests/golden/ (run by hand; slow)."""

import json
import pathlib
import time

import oracles

HERE = pathlib.Path(__file__).parent / "golden"


def k3_oracle():
    out = {}
    for d in (0, 1, 2):
        t0 = time.time()
        poly, cs = oracles.printed_k3(d)
        terms = oracles.tp_to_dict(poly, cs)
        out[str(d)] = [{"monomial": list(m), "coefficient": str(c)} for m, c in sorted(terms.items())]
        print(f"k=3 d={d}: {len(terms)} terms, {time.time() - t0:.1f}s")
    (HERE / "k3_oracle.json").write_text(json.dumps(out, indent=1) + "\n")


if __name__ == "__main__":
    k3_oracle()
