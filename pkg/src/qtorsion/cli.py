"""Command line front end: class groups, witnesses, orbits, Selmer counts and
a batch survey writing CSV."""

import argparse
import csv
import io
import json
import os
import random
import sys
import tempfile
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, fields

from . import qforms
from .binforms import parse_binform, resultant
from .orbits import HeightExhausted, enumerate_orbits
from .qforms import DiscriminantError, QuadForm
from .selmer import coker_group, inversion_orbit_count
from .witness import WitnessError, construct_witness, verify_witness

EXIT_DOMAIN, EXIT_IO, EXIT_INTERNAL = 2, 3, 4
CACHE_ENV = "TORSION_CACHE_DIR"


class UsageError(ValueError):
    pass


def parse_form(text: str) -> QuadForm:
    parts = text.split(",")
    if len(parts) != 3:
        raise UsageError(f"form must be a,b,c, got {text!r}")
    return QuadForm(*(int(p) for p in parts))


def parse_range(text: str):
    lo, sep, hi = text.partition("..")
    if not sep:
        raise UsageError(f"range must be LO..HI, got {text!r}")
    return int(lo), int(hi)


def parse_int_list(text: str) -> list:
    return [int(s) for s in text.split(",") if s]


def valid_discriminant(d: int) -> bool:
    try:
        qforms.check_discriminant(d)
    except DiscriminantError:
        return False
    return True


# -- cache -------------------------------------------------------------------------

class ClassGroupCache:
    """Class group form lists in JSON-lines files, one file per bucket of 1000."""

    def __init__(self, root):
        self.root = root
        self._loaded = {}

    def _path(self, bucket: int) -> str:
        return os.path.join(self.root, f"classgroups_{bucket}.jsonl")

    def _bucket(self, bucket: int) -> dict:
        if bucket not in self._loaded:
            entries = {}
            path = self._path(bucket)
            if os.path.exists(path):
                with open(path) as fh:
                    for line in fh:
                        if line.strip():
                            rec = json.loads(line)
                            entries[rec["disc"]] = rec["forms"]
            self._loaded[bucket] = entries
        return self._loaded[bucket]

    def get(self, d: int):
        return self._bucket(d // 1000).get(d)

    def put(self, d: int, forms: list) -> None:
        bucket = d // 1000
        entries = self._bucket(bucket)
        if d in entries:
            return
        entries[d] = forms
        os.makedirs(self.root, exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=self.root, suffix=".tmp")
        try:
            with os.fdopen(fd, "w") as fh:
                for key in sorted(entries):
                    fh.write(json.dumps({"disc": key, "forms": entries[key]}) + "\n")
            os.replace(tmp, self._path(bucket))
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise

    def keys(self):
        out = []
        if os.path.isdir(self.root):
            for name in os.listdir(self.root):
                if name.startswith("classgroups_") and name.endswith(".jsonl"):
                    out.extend(self._bucket(int(name[12:-6])))
        return sorted(out)

    def spot_check(self, rng=random) -> None:
        keys = self.keys()
        if not keys:
            return
        d = rng.choice(keys)
        fresh = [f.as_list() for f in qforms.class_group(d).forms]
        if [list(f) for f in fresh] != self.get(d):
            raise AssertionError(f"cached class group for {d} differs from a fresh computation")


def open_cache(args):
    root = getattr(args, "cache_dir", None) or os.environ.get(CACHE_ENV)
    if not root:
        return None
    cache = ClassGroupCache(root)
    cache.spot_check()
    return cache


def class_forms(d: int, cache=None) -> list:
    if cache is not None:
        hit = cache.get(d)
        if hit is not None:
            return [list(f) for f in hit]
    forms = [list(f.as_list()) for f in qforms.class_group(d).forms]
    if cache is not None:
        cache.put(d, forms)
    return forms


# -- survey ----------------------------------------------------------------------------

@dataclass
class SurveyRow:
    disc: int
    class_number: int
    n: int
    torsion_class_count: int
    witnesses_found: int
    all_verified: bool
    predicted_orbits: int
    bruteforce_orbits: int = None
    status: str = "ok"


SURVEY_COLUMNS = [f.name for f in fields(SurveyRow)]


def survey_row(d: int, n: int, height=None) -> SurveyRow:
    cg = qforms.class_group(d)
    torsion = found = 0
    verified = True
    violations = 0
    for f in cg.forms:
        tor = qforms.is_n_torsion(f, n)
        w = construct_witness(f, n)
        torsion += tor
        if (w is not None) != tor:
            violations += 1
        if w is not None:
            found += 1
            rep = verify_witness(f, w)
            if not (rep.unit and rep.ideal_equal and rep.torsion):
                verified = False
    row = SurveyRow(d, cg.order, n, torsion, found, verified,
                    inversion_orbit_count(coker_group(d, n).group))
    if height is not None and n >= 3:
        try:
            row.bruteforce_orbits = enumerate_orbits(d, n, height, predict=False).count
        except HeightExhausted as exc:
            row.bruteforce_orbits = exc.partial.count
    if violations or not verified:
        row.status = "violation"
    return row


def _survey_task(args):
    return survey_row(*args)


def run_survey(lo: int, hi: int, ns, jobs: int = 1, height=None, fundamental=False) -> list:
    tasks = []
    for d in range(lo, hi + 1):
        if not valid_discriminant(d):
            continue
        if fundamental and not qforms.is_fundamental(d):
            continue
        for n in ns:
            tasks.append((d, n, height))
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(_survey_task, tasks, chunksize=8))
    else:
        rows = [_survey_task(t) for t in tasks]
    rows.sort(key=lambda r: (r.disc, r.n))
    return rows


def rows_to_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(SURVEY_COLUMNS)
    for r in rows:
        vals = asdict(r)
        w.writerow(["" if vals[c] is None else vals[c] for c in SURVEY_COLUMNS])
    return buf.getvalue()


# -- commands ----------------------------------------------------------------------------

def _emit(args, payload: dict, text: str) -> None:
    if args.json:
        print(json.dumps(payload))
    else:
        print(text)


def _form_str(f) -> str:
    return ",".join(str(x) for x in f)


def cmd_classgroup(args, cache) -> int:
    d = args.disc
    qforms.check_discriminant(d)
    forms = class_forms(d, cache)
    payload = {"disc": d, "h": len(forms), "forms": forms}
    if args.table:
        payload["table"] = qforms.class_group(d).table
    text = f"h({d}) = {len(forms)}\n" + "\n".join(_form_str(f) for f in forms)
    _emit(args, payload, text)
    return 0


def _check_form_disc(q: QuadForm, d) -> None:
    if d is not None and q.disc != d:
        raise UsageError(f"form {_form_str(q.as_list())} has discriminant {q.disc}, not {d}")


def cmd_witness(args, cache) -> int:
    q = parse_form(args.form)
    _check_form_disc(q, args.disc)
    delta = construct_witness(q, args.n)
    if delta is None:
        payload = {"found": False, "delta": None, "resultant": None}
        text = f"no witness: the class of {q} is not {args.n}-torsion"
    else:
        r = resultant(q, delta)
        payload = {"found": True, "delta": list(delta.coeffs), "resultant": r}
        text = f"delta = {delta}\ncoefficients t0..tn = {_form_str(delta.coeffs)}\nresultant = {r}"
    _emit(args, payload, text)
    return 0


def cmd_verify(args, cache) -> int:
    q = parse_form(args.form)
    _check_form_disc(q, args.disc)
    delta = parse_binform(args.delta)
    rep = verify_witness(q, delta)
    text = "\n".join(f"{k}: {v}" for k, v in rep.as_dict().items())
    _emit(args, rep.as_dict(), text)
    return 0


def cmd_resultant(args, cache) -> int:
    q = parse_form(args.form)
    delta = parse_binform(args.delta)
    r = resultant(q, delta)
    _emit(args, {"resultant": r}, str(r))
    return 0


def cmd_orbits(args, cache) -> int:
    d, n = args.disc, args.n
    qforms.check_discriminant(d)
    if args.predict_only:
        pred = inversion_orbit_count(coker_group(d, n).group)
        _emit(args, {"disc": d, "n": n, "predicted": pred}, f"predicted orbits: {pred}")
        return 0
    if args.height is None:
        raise UsageError("--height is required unless --predict-only is given")
    try:
        rep = enumerate_orbits(d, n, args.height, max_sweep=args.max_sweep,
                               short_circuit=args.short_circuit)
    except HeightExhausted as exc:
        rep = exc.partial
    lines = [f"orbits found: {rep.count} (predicted {rep.predicted}, status {rep.status})"]
    for p in rep.representatives:
        lines.append(f"  q = {_form_str(p.q.as_list())}  delta = {_form_str(p.delta.coeffs)}")
    lines.extend(f"note: {s}" for s in rep.notes)
    _emit(args, rep.as_dict(), "\n".join(lines))
    return 0


def cmd_selmer(args, cache) -> int:
    desc = coker_group(args.disc, args.n)
    out = desc.as_dict()
    text = (f"A = {' x '.join(f'Z/{k}' for k in out['invariants']) or 'trivial'}"
            f" (order {out['order']}, 2-torsion {out['two_torsion']})\n"
            f"predicted orbits: {out['predicted_orbits']}")
    _emit(args, out, text)
    return 0


def cmd_survey(args, cache) -> int:
    lo, hi = parse_range(args.disc_range)
    ns = parse_int_list(args.n_list)
    rows = run_survey(lo, hi, ns, jobs=args.jobs, height=args.height,
                      fundamental=args.fundamental)
    if cache is not None:
        for d in sorted({r.disc for r in rows}):
            class_forms(d, cache)
    data = rows_to_csv(rows)
    if args.out:
        tmp = args.out + ".tmp"
        with open(tmp, "w", newline="") as fh:
            fh.write(data)
        os.replace(tmp, args.out)
    elif not args.json:
        sys.stdout.write(data)
    bad = sum(r.status != "ok" for r in rows)
    summary = {"rows": len(rows), "violations": bad, "out": args.out}
    if args.json:
        print(json.dumps(summary))
    else:
        print(f"rows: {len(rows)}  violations: {bad}", file=sys.stderr)
    return EXIT_INTERNAL if bad else 0


# -- argument handling ---------------------------------------------------------------

VALUE_FLAGS = ("--disc", "--form", "--delta", "--disc-range", "--n")


def _join_values(argv):
    """Attach values starting with '-' (like ``-1,0,2``) to their flag."""
    out = []
    it = iter(argv)
    for tok in it:
        if tok in VALUE_FLAGS:
            val = next(it, None)
            out.append(tok if val is None else f"{tok}={val}")
        else:
            out.append(tok)
    return out


def build_parser() -> argparse.ArgumentParser:
    def shared(suppress):
        kw = {"default": argparse.SUPPRESS} if suppress else {}
        c = argparse.ArgumentParser(add_help=False)
        c.add_argument("--json", action="store_true", help="machine-readable output", **kw)
        c.add_argument("--cache-dir", help=f"class group cache (default ${CACHE_ENV})", **kw)
        return c

    # options may come before or after the subcommand
    common = shared(True)
    p = argparse.ArgumentParser(prog="qtorsion", parents=[shared(False)],
                                description="Torsion in class groups of binary quadratic forms.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("classgroup", parents=[common], help="list reduced class representatives")
    s.add_argument("--disc", type=int, required=True)
    s.add_argument("--table", action="store_true", help="include the composition table")

    s = sub.add_parser("witness", parents=[common], help="build a unit-resultant certificate")
    s.add_argument("--disc", type=int)
    s.add_argument("--form", required=True, help="a,b,c")
    s.add_argument("--n", type=int, required=True)

    s = sub.add_parser("verify", parents=[common], help="check a certificate")
    s.add_argument("--disc", type=int)
    s.add_argument("--form", required=True, help="a,b,c")
    s.add_argument("--delta", required=True, help="t0,...,tn")

    s = sub.add_parser("resultant", parents=[common], help="resultant of q and delta")
    s.add_argument("--form", required=True)
    s.add_argument("--delta", required=True)

    s = sub.add_parser("orbits", parents=[common], help="count orbits of unit-resultant pairs")
    s.add_argument("--disc", type=int, required=True)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--height", type=int)
    s.add_argument("--predict-only", action="store_true")
    s.add_argument("--short-circuit", action="store_true",
                   help="stop once the predicted number of orbits is reached")
    s.add_argument("--max-sweep", type=int, default=2_000_000)

    s = sub.add_parser("selmer", parents=[common], help="the Selmer quotient and its orbit count")
    s.add_argument("--disc", type=int, required=True)
    s.add_argument("--n", type=int, required=True)

    s = sub.add_parser("survey", parents=[common], help="batch check over a discriminant range")
    s.add_argument("--disc-range", required=True, help="LO..HI, inclusive")
    s.add_argument("--n", dest="n_list", default="2,3,4,5", help="comma list of n")
    s.add_argument("--out", help="CSV path (default stdout)")
    s.add_argument("--jobs", type=int, default=1)
    s.add_argument("--height", type=int, help="also brute-force orbits up to this height")
    s.add_argument("--fundamental", action="store_true",
                   help="only fundamental discriminants")
    return p


COMMANDS = {
    "classgroup": cmd_classgroup,
    "witness": cmd_witness,
    "verify": cmd_verify,
    "resultant": cmd_resultant,
    "orbits": cmd_orbits,
    "selmer": cmd_selmer,
    "survey": cmd_survey,
}


def main(argv=None) -> int:
    argv = _join_values(sys.argv[1:] if argv is None else list(argv))
    args = build_parser().parse_args(argv)
    try:
        cache = open_cache(args)
        return COMMANDS[args.command](args, cache)
    except (WitnessError, AssertionError) as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
