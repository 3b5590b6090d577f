"""Command-line front end.

Data goes to --out (or stdout), diagnostics to stderr, and every randomized
path is reproducible from --seed.  Exit codes: 0 success / expected verdict,
1 failed verification, 2 precondition violation, 3 completion failure,
4 budget exceeded, 5 parse error.  Output files are written atomically.
"""

from __future__ import annotations

import argparse
import os
import random
import sys
import tempfile

from .construct import (CompletionError, FieldTooSmallError,
                        product_basis_codim1, product_tuple,
                        random_codim_subspace, witness_no_product_basis)
from .fields import ParseError, parse_field
from .gpt import build_s1s3_counterexample, format_certificate
from .tensor import (Subspace, format_subspace, format_vector, parse_shape,
                     parse_subspace, parse_vector_file)
from .verify import (BudgetExceededError, enumerate_product_vectors,
                     format_sweep_report, has_product_basis_bruteforce,
                     sweep_codim1, verify_product_basis)


def _write_out(path, text):
    """Atomic write: no partial files on error."""
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".prodbasis-")
    try:
        with os.fdopen(fd, "w") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        os.unlink(tmp)
        raise


def _read_text(path):
    if path is None or path == "-":
        return sys.stdin.read()
    with open(path) as handle:
        return handle.read()


def _note(msg):
    print(msg, file=sys.stderr)


def _tuple_text(vectors):
    return "".join(format_vector(pv.embedded) + "\n" for pv in vectors)


def cmd_construct(args):
    shape = parse_shape(args.shape)
    f = parse_field(args.field)
    if args.covector:
        covs = parse_vector_file(_read_text(args.covector))
        if not covs:
            raise ParseError(f"no vectors in {args.covector}")
        for w in covs:
            if w.shape != shape or w.field != f:
                raise ValueError("covector file does not match --shape/--field")
        L = Subspace.from_cogenerators(shape, f, covs)
    else:
        r = 1 if args.random_codim is None else args.random_codim
        rng = random.Random(args.seed)
        L = random_codim_subspace(shape, f, r, rng)
    r = len(L.cogenerators())
    if r == 1:
        basis = product_basis_codim1(L, seed=args.seed, force=args.force)
    else:
        basis = product_tuple(L, seed=args.seed, force=args.force)
    report = verify_product_basis(basis.vectors, L)
    expected = shape.total - r ** shape.parties
    # a full basis of L only when r = 1; for r >= 2 the tuple is smaller than L
    ok = (not report.failures and report.rank_found == len(basis)
          and len(basis) == expected)
    _write_out(args.out, _tuple_text(basis))
    _note(f"vectors={len(basis)} expected={expected} rank={report.rank_found} "
          f"dim={L.dim} verified={'ok' if ok else 'fail'}")
    return 0 if ok else 1


def cmd_witness(args):
    shape = parse_shape(args.shape)
    f = parse_field(args.field)
    L = witness_no_product_basis(shape, f)
    _write_out(args.out, format_subspace(L))
    _note(f"witness shape={shape} field={f} dim={L.dim}")
    return 0


def cmd_verify(args):
    L = parse_subspace(_read_text(args.subspace))
    candidate = parse_vector_file(_read_text(args.candidate))
    report = verify_product_basis(candidate, L)
    lines = [f"index={i} reason={reason}" for i, reason in report.failures]
    lines.append(f"ok={'true' if report.ok else 'false'} "
                 f"rank={report.rank_found} dim={L.dim}")
    _write_out(args.out, "\n".join(lines) + "\n")
    return 0 if report.ok else 1


def cmd_enumerate(args):
    L = parse_subspace(_read_text(args.subspace))
    reps = enumerate_product_vectors(L, budget=args.budget)
    result = has_product_basis_bruteforce(L, budget=args.budget)
    verdict = "PRODUCT_BASIS" if result.has_basis else "NO_PRODUCT_BASIS"
    lines = [format_vector(pv.embedded) for pv in reps]
    lines.append(f"product_vectors={len(reps)} product_span_rank={result.span_rank} "
                 f"dim={L.dim} verdict={verdict}")
    _write_out(args.out, "\n".join(lines) + "\n")
    return 0


def cmd_sweep(args):
    shape = parse_shape(args.shape)
    f = parse_field(args.field)
    report = sweep_codim1(shape, f, budget=args.budget, seed=args.seed)
    _write_out(args.out, format_sweep_report(report))
    _note(f"sweep shape={shape} field={f} classes={report.classes} "
          f"discrepancies={report.discrepancies}")
    return 0


def cmd_gpt_demo(args):
    shape = parse_shape(args.shape)
    cert = build_s1s3_counterexample(shape)
    report = verify_product_basis(cert.basis, cert.subspace)
    lines = [
        f"subspace shape={shape} dim={cert.subspace.dim}",
        format_certificate(cert),
        f"product_basis={'ok' if report.ok else 'fail'}",
    ]
    _write_out(args.out, "\n".join(lines) + "\n")
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="prodbasis",
        description="Exact product bases of subspaces of tensor product spaces.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, shape=True, field=True, seed=False, budget=False):
        if shape:
            p.add_argument("--shape", required=True, help="local dimensions, e.g. 2x2x3")
        if field:
            p.add_argument("--field", required=True, help='"Q", "GF(p)" or "GFp"')
        if seed:
            p.add_argument("--seed", type=int, default=0)
        if budget:
            p.add_argument("--budget", type=int, default=10_000_000)
        p.add_argument("--out", default=None, help="output file (default stdout)")

    p = sub.add_parser("construct", help="build a verified product tuple")
    add_common(p, seed=True)
    p.add_argument("--covector", help="file of cogenerator vector lines")
    p.add_argument("--random-codim", type=int, metavar="R",
                   help="sample R random cogenerators instead (default 1)")
    p.add_argument("--force", action="store_true",
                   help="attempt outside the guaranteed field-size regime")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("witness", help="emit the no-product-basis witness subspace")
    add_common(p)
    p.set_defaults(func=cmd_witness)

    p = sub.add_parser("verify", help="verify a candidate product basis against a subspace")
    p.add_argument("--subspace", required=True)
    p.add_argument("--candidate", required=True)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("enumerate",
                       help="enumerate product vectors in a subspace and decide product-basis existence")
    p.add_argument("--subspace", default=None, help="subspace file (default stdin)")
    p.add_argument("--budget", type=int, default=10_000_000)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("sweep", help="construction vs oracle over all covector classes")
    add_common(p, seed=True, budget=True)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("gpt-demo", help="print the non-separability certificate")
    add_common(p, field=False)
    p.set_defaults(func=cmd_gpt_demo)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ParseError as e:
        _note(f"parse error: {e}")
        return 5
    except BudgetExceededError as e:
        _note(f"budget exceeded: {e}")
        return 4
    except CompletionError as e:
        _note(f"completion failure: {e}")
        return 3
    except FieldTooSmallError as e:
        _note(f"precondition violation: {e}")
        return 2
    except (ValueError, IndexError) as e:
        _note(f"precondition violation: {e}")
        return 2
    except OSError as e:
        _note(f"io error: {e}")
        return 5


if __name__ == "__main__":
    sys.exit(main())
