"""Command-line driver.

    permlcu scale     --input M.csv [--mode auto|sinkhorn|embed|circulant]
    permlcu decompose --input S.csv [--kmax K] [--truncate-keep N | --truncate-min-weight W]
    permlcu compile   --input M.csv [--scheme star|chain] [--passes ...] [--emit qasm|json|both]
    permlcu verify    --circuit C.json|C.qasm --matrix S.csv [--tol T]
    permlcu perm      --perm "(0 3)(1 2)" --qubits 2
    permlcu random    --size N --perms K --seed S

Exit status: 0 ok, 1 usage, 2 domain/precondition, 3 verification failed,
4 non-convergence.
"""

import argparse
import json
import logging
import sys
from pathlib import Path

import numpy as np

from . import io
from .birkhoff import birkhoff_decompose, random_doubly_stochastic, reconstruct, truncate
from .circuit import circuit_from_dict, circuit_to_dict
from .errors import PermLCUError
from .matrix import DEFAULT_MAX_ITERS, DEFAULT_TOL
from .optimizer import DEFAULT_PIPELINE, optimize, parse_pipeline
from .permutation import format_cycles, parse_cycles
from .pipeline import ROUTES, compile_matrix, pad_to_power_of_two, to_doubly_stochastic
from .simulator import verify_block_encoding
from .synth import VERIFY_TOL, BlockEncoding, permutation_to_circuit

log = logging.getLogger("permlcu")

EXIT_OK, EXIT_USAGE, EXIT_DOMAIN, EXIT_VERIFY, EXIT_NONCONV = 0, 1, 2, 3, 4


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _out_dir(args):
    d = Path(args.output_dir)
    d.mkdir(parents=True, exist_ok=True)
    return d


def _stem(path):
    return Path(path).stem


def _say(args, msg):
    if not args.quiet:
        print(msg)


def cmd_scale(args):
    A = io.read_matrix(args.input)
    scaled = to_doubly_stochastic(A, args.mode, args.tol, args.max_iters)
    out = _out_dir(args) / f"{_stem(args.input)}.scaled.json"
    io.write_json(out, scaled.to_dict())
    io.write_matrix(out.with_name(f"{_stem(args.input)}.scaled.csv"), scaled.matrix)
    _say(args, f"route: {scaled.route}" + (f" ({scaled.note})" if scaled.note else ""))
    _say(args, f"wrote {out}")
    return EXIT_OK


def _decomp_summary(args, d):
    _say(args, f"k = {d.k}, residual = {d.residual_norm:.3e}")
    for t in d.terms:
        _say(args, f"  {t.weight:.12g}  {format_cycles(t.perm)}")


def cmd_decompose(args):
    S = pad_to_power_of_two(io.read_matrix(args.input)) if args.pad else io.read_matrix(args.input)
    d = birkhoff_decompose(S, k_max=args.kmax, tol=args.tol)
    report = {"k": d.k, "residual": d.residual_norm}
    if args.truncate_keep is not None or args.truncate_min_weight is not None:
        d, bound = truncate(d, keep=args.truncate_keep, min_weight=args.truncate_min_weight)
        dev = float(np.abs(reconstruct(d) - S).max())
        report.update({"truncated_k": d.k, "error_bound": bound, "max_deviation": dev})
        _say(args, f"truncated to {d.k} terms, error bound {bound:.12g} (observed {dev:.3e})")
    out = _out_dir(args) / f"{_stem(args.input)}.decomposition.json"
    io.write_json(out, d.to_dict())
    io.write_json(out.with_name(f"{_stem(args.input)}.decompose-report.json"), report)
    _decomp_summary(args, d)
    _say(args, f"wrote {out}")
    return EXIT_OK


def cmd_compile(args):
    A = io.read_matrix(args.input)
    passes = parse_pipeline(args.passes) if args.passes else ()
    res = compile_matrix(A, args.mode, args.kmax, args.tol, args.max_iters, args.scheme, passes)
    d_out = _out_dir(args)
    stem = _stem(args.input)
    circuit = res.encoding.circuit
    if args.emit in ("json", "both"):
        io.write_json(d_out / f"{stem}.circuit.json", circuit_to_dict(circuit))
    if args.emit in ("qasm", "both"):
        (d_out / f"{stem}.qasm").write_text(io.to_qasm(circuit))
    io.write_json(d_out / f"{stem}.decomposition.json", res.decomposition.to_dict())
    io.write_matrix(d_out / f"{stem}.target.csv", res.target)
    io.write_json(d_out / f"{stem}.report.json", res.report())
    _say(args, f"route {res.scaled.route}; k = {res.decomposition.k}; "
               f"qubits {res.encoding.system_qubits}+{res.encoding.ancilla_qubits}; "
               f"gates {res.opt_stats['gates_before']} -> {res.opt_stats['gates_after']}")
    if res.verification is None:
        _say(args, "verification skipped (circuit too wide for dense simulation)")
        return EXIT_OK
    _say(args, str(res.verification))
    return EXIT_OK if res.verification.passed else EXIT_VERIFY


def _load_circuit(path):
    path = Path(path)
    text = path.read_text()
    if path.suffix.lower() == ".qasm":
        return io.from_qasm(text)
    return circuit_from_dict(json.loads(text))


def cmd_verify(args):
    circuit = _load_circuit(args.circuit)
    S = io.read_matrix(args.matrix)
    S = pad_to_power_of_two(S)
    n = S.shape[0].bit_length() - 1
    if circuit.n_qubits < n:
        raise PermLCUError(f"circuit has {circuit.n_qubits} qubits, matrix needs {n}")
    be = BlockEncoding(circuit, n, circuit.n_qubits - n, 0)
    rep = verify_block_encoding(be, S, args.tol)
    print(rep)
    return EXIT_OK if rep.passed else EXIT_VERIFY


def cmd_perm(args):
    p = parse_cycles(args.perm, 1 << args.qubits)
    c = permutation_to_circuit(p, args.qubits, args.scheme)
    if args.passes:
        c, _ = optimize(c, parse_pipeline(args.passes))
    if args.emit == "json":
        print(io.dumps(circuit_to_dict(c)), end="")
    else:
        print(io.to_qasm(c), end="")
    return EXIT_OK


def cmd_random(args):
    rng = np.random.default_rng(args.seed)
    S = random_doubly_stochastic(args.size, args.perms, rng)
    out = _out_dir(args) / f"random-{args.size}-{args.seed}.csv"
    io.write_matrix(out, S)
    _say(args, f"wrote {out}")
    return EXIT_OK


def build_parser():
    p = _Parser(prog="permlcu", description="Compile matrices into permutation-LCU block encodings.")
    p.add_argument("--quiet", action="store_true", help="suppress progress output")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, inp=True):
        if inp:
            sp.add_argument("--input", required=True, help="matrix file (.csv or .mtx)")
        sp.add_argument("--output-dir", default=".", help="where output files go")
        sp.add_argument("--quiet", action="store_true", default=argparse.SUPPRESS)

    sp = sub.add_parser("scale", help="convert a matrix to doubly stochastic form")
    common(sp)
    sp.add_argument("--mode", choices=ROUTES, default="auto")
    sp.add_argument("--tol", type=float, default=DEFAULT_TOL)
    sp.add_argument("--max-iters", type=int, default=DEFAULT_MAX_ITERS)
    sp.set_defaults(func=cmd_scale)

    sp = sub.add_parser("decompose", help="Birkhoff decomposition of a doubly stochastic matrix")
    common(sp)
    sp.add_argument("--kmax", type=int, default=None)
    sp.add_argument("--tol", type=float, default=1e-12)
    sp.add_argument("--pad", action="store_true", help="pad to a power-of-two size with an identity block")
    g = sp.add_mutually_exclusive_group()
    g.add_argument("--truncate-keep", type=int, default=None)
    g.add_argument("--truncate-min-weight", type=float, default=None)
    sp.set_defaults(func=cmd_decompose)

    sp = sub.add_parser("compile", help="full pipeline: scale, decompose, synthesise, optimise, verify")
    common(sp)
    sp.add_argument("--mode", choices=ROUTES, default="auto")
    sp.add_argument("--tol", type=float, default=DEFAULT_TOL)
    sp.add_argument("--max-iters", type=int, default=DEFAULT_MAX_ITERS)
    sp.add_argument("--kmax", type=int, default=None)
    sp.add_argument("--scheme", choices=("star", "chain"), default="star")
    sp.add_argument("--passes", default=",".join(DEFAULT_PIPELINE),
                    help="comma-separated passes (flatten, reorder, reduce, group); empty disables")
    sp.add_argument("--emit", choices=("qasm", "json", "both"), default="both")
    sp.set_defaults(func=cmd_compile)

    sp = sub.add_parser("verify", help="check a circuit block-encodes a matrix")
    sp.add_argument("--circuit", "--input", dest="circuit", required=True, help="circuit .json or .qasm")
    sp.add_argument("--matrix", required=True, help="matrix file (.csv or .mtx)")
    sp.add_argument("--tol", type=float, default=VERIFY_TOL)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("perm", help="synthesise one permutation given in cycle notation")
    sp.add_argument("--perm", required=True, help='e.g. "(0 3)(1 2)"')
    sp.add_argument("--qubits", type=int, required=True)
    sp.add_argument("--scheme", choices=("star", "chain"), default="star")
    sp.add_argument("--passes", default="")
    sp.add_argument("--emit", choices=("qasm", "json"), default="qasm")
    sp.set_defaults(func=cmd_perm)

    sp = sub.add_parser("random", help="write a random doubly stochastic matrix")
    common(sp, inp=False)
    sp.add_argument("--size", type=int, required=True)
    sp.add_argument("--perms", type=int, default=4)
    sp.add_argument("--seed", type=int, default=0)
    sp.set_defaults(func=cmd_random)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.ERROR if args.quiet else logging.WARNING, format="%(levelname)s: %(message)s")
    try:
        return args.func(args)
    except PermLCUError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except (OSError, json.JSONDecodeError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
