"""Run every analysis on the car-rental fixture and write diagrams.

    python scripts/car_rental_report.py --out out/car_rental

Prints automaton sizes, bounded trace counts per EET, the pairwise
refinement matrix and the loose-consistency table, then renders each EET
as text and SVG into the output directory.
"""

import argparse
from dataclasses import dataclass
from pathlib import Path

from eetc.analysis import conjoin_nonempty, loose_consistent, refines
from eetc.oracle import denote
from eetc.parser import parse_file, resolve
from eetc.render import RenderOptions, render_eet
from eetc.semantics import compile

ROOT = Path(__file__).resolve().parent.parent


@dataclass
class ReportConfig:
    document: Path = ROOT / "fixtures" / "car_rental.eet"
    out: Path = ROOT / "out" / "car_rental"
    bounds: tuple = (4, 5, 9, 10)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--document", type=Path, default=ReportConfig.document)
    ap.add_argument("--out", type=Path, default=ReportConfig.out)
    args = ap.parse_args()
    cfg = ReportConfig(document=args.document, out=args.out)

    doc = parse_file(cfg.document)
    eets = {name: resolve(doc, name) for name in doc.eets}

    print("## automata and bounded trace counts")
    print("eet".ljust(24) + "states  trans  " + "  ".join(f"<={b:<3}" for b in cfg.bounds))
    for name, e in eets.items():
        a = compile(e, doc)
        counts = "  ".join(f"{len(denote(e, doc, b)):<5}" for b in cfg.bounds)
        print(f"{name:<24}{a.n_states:<8}{a.n_transitions:<7}{counts}")

    print("\n## refinement (row refines column)")
    names = list(eets)
    print(" " * 24 + " ".join(f"{n[:8]:>8}" for n in names))
    for c in names:
        row = [refines(eets[c], eets[a], doc).holds for a in names]
        print(f"{c:<24}" + " ".join(f"{'yes' if r else '-':>8}" for r in row))

    print("\n## loose consistency against CarReservation")
    for name in names:
        seg = loose_consistent(eets[name], eets["CarReservation"], "segment", doc)
        emb = loose_consistent(eets[name], eets["CarReservation"], "embed", doc)
        w = "-" if seg.witness is None else f"{len(seg.witness)} events"
        print(f"{name:<24}segment={seg.holds!s:<6} embed={emb.holds!s:<6} shortest common word: {w}")

    conj = conjoin_nonempty([eets["CarReservation"], eets["FailedReservation"]], doc)
    print(f"\nCarReservation and FailedReservation together: non-empty={conj.holds}, "
          f"witness length {len(conj.witness) if conj.witness is not None else '-'}")

    cfg.out.mkdir(parents=True, exist_ok=True)
    for name, body in doc.eets.items():
        for fmt, ext in (("text", "txt"), ("svg", "svg")):
            (cfg.out / f"{name}.{ext}").write_bytes(render_eet(body, doc, RenderOptions(format=fmt)))
    print(f"\ndiagrams written to {cfg.out}")


if __name__ == "__main__":
    main()
