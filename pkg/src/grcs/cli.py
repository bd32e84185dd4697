"""Command line interface.

Exit codes: 0 success, 1 usage error, 2 reject, 3 I/O error, 4 malformed input.
"""

import argparse
import os
import random
import statistics
import sys
import tempfile
import time


from . import cscrypt, ddh_lab, gmatrix, gring, wire
from ._random import system_rng
from .cscrypt import DecryptionRejected, Params

EXIT_OK, EXIT_USAGE, EXIT_REJECT, EXIT_IO, EXIT_FORMAT = 0, 1, 2, 3, 4


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _parse_big(text: str) -> int:
    """Accept plain decimal, ``10^100`` or ``1e100``."""
    t = text.strip().lower()
    try:
        if "^" in t:
            base, exp = t.split("^")
            return int(base) ** int(exp)
        if "e" in t:
            mant, exp = t.split("e")
            return int(mant) * 10 ** int(exp)
        return int(t)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None


def _positive(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be at least 1, got {v}")
    return v


def _insecure_rng(seed):
    if seed is None:
        return system_rng()
    print("WARNING: --insecure-seed makes key material predictable; use only for test vectors",
          file=sys.stderr)
    return random.Random(seed)


def _read(path) -> bytes:
    if path == "-":
        return sys.stdin.buffer.read()
    with open(path, "rb") as fh:
        return fh.read()


def _write_atomic(path, data: bytes):
    if path == "-":
        sys.stdout.buffer.write(data)
        sys.stdout.buffer.flush()
        return
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".grcs-")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def cmd_keygen(args):
    try:
        params = Params(n=args.n, k=args.k, factors=args.factors)
    except ValueError as exc:
        raise UsageError(str(exc))
    if args.factors > 255 or args.k > 0xFFFF:
        raise UsageError("factors must be at most 255 and k at most 65535")
    pk, sk = cscrypt.keygen(_insecure_rng(args.insecure_seed), params)
    _write_atomic(args.out_pub, wire.encode_key(pk))
    _write_atomic(args.out_sec, wire.encode_key(sk))
    return EXIT_OK


def _load_key(path, want):
    key = wire.decode_key(_read(path))
    if not isinstance(key, want):
        raise wire.MalformedEncoding(f"{path}: expected a {want.__name__}")
    return key


def cmd_encrypt(args):
    pk = _load_key(args.pub, cscrypt.PublicKey)
    data = _read(args.inp)
    rng = system_rng()
    chunks = [data[i:i + wire.MAX_PAYLOAD] for i in range(0, len(data), wire.MAX_PAYLOAD)] or [b""]
    out = b"".join(wire.encode_ciphertext(cscrypt.encrypt(rng, pk, wire.encode_message(c))) for c in chunks)
    _write_atomic(args.out, out)
    return EXIT_OK


def cmd_decrypt(args):
    sk = _load_key(args.sec, cscrypt.SecretKey)
    raw = _read(args.inp)
    try:
        cts = wire.decode_ciphertexts(raw)
        if not cts:
            raise DecryptionRejected("no ciphertext records")
        plain = b"".join(wire.decode_message(cscrypt.decrypt(sk, ct)) for ct in cts)
    except (DecryptionRejected, wire.MalformedEncoding):
        # every ciphertext-side failure looks the same to the caller
        print("reject", file=sys.stderr)
        return EXIT_REJECT
    _write_atomic(args.out, plain)
    return EXIT_OK


def cmd_encode(args):
    m = wire.encode_message(_read(args.inp))
    _write_atomic(args.out, wire.serialize_matrix(m))
    return EXIT_OK


def cmd_decode(args):
    m = wire.deserialize_matrix(_read(args.inp))
    _write_atomic(args.out, wire.decode_message(m))
    return EXIT_OK


def _experiment(args, mode):
    cfg = ddh_lab.ExperimentConfig(mode=mode, trials=args.trials, seed=args.seed,
                                   count_mode=args.count_mode, workers=args.workers)
    if mode == "ddh":
        a, b = ddh_lab.run_ddh_experiment(None, cfg)
    else:
        a, b = ddh_lab.run_masking_experiment(None, cfg)
    series = ddh_lab.qq_series(a, b)
    deviation = ddh_lab.max_qq_deviation(series)
    control_rng = random.Random(f"grcs-control:{args.seed}") if args.seed is not None else system_rng()
    threshold = ddh_lab.calibrate_threshold(control_rng, args.trials, args.control_runs,
                                            count_mode=args.count_mode)
    summary = ddh_lab.summary_line(cfg, deviation, threshold)
    if args.out is not None:
        ddh_lab.write_csv(series, args.out, summary)
    if args.svg is not None:
        ddh_lab.write_svg(series, args.svg, title=mode)
    print(summary)
    return EXIT_OK


def cmd_ddh(args):
    return _experiment(args, "ddh")


def cmd_mask(args):
    return _experiment(args, "masking")


def _time(fn, reps):
    samples = []
    for _ in range(reps):
        t0 = time.perf_counter()
        fn()
        samples.append(time.perf_counter() - t0)
    return statistics.median(samples)


def cmd_bench(args):
    rng = random.Random(0)
    a, b = gring.random_element(rng), gring.random_element(rng)
    m, n = gmatrix.random_matrix(rng), gmatrix.random_matrix(rng)
    e333 = (1 << 332) | rng.getrandbits(332)
    e666 = (1 << 665) | rng.getrandbits(665)
    kernels = [
        ("gring_mul", lambda: gring.mul(a, b)),
        ("mat_mul", lambda: gmatrix.mat_mul(m, n)),
        ("mat_pow_333", lambda: gmatrix.mat_pow(m, e333)),
        ("mat_pow_666", lambda: gmatrix.mat_pow(m, e666)),
    ]
    for name, fn in kernels:
        med = _time(fn, args.reps)
        print(f"{name}_median_s={med:.6g}")
        print(f"{name}_ops_per_sec={1 / med:.6g}")
    return EXIT_OK


def _density_line(name, m):
    d = gmatrix.density(m)
    return f"{name}: density mean={d.mean():.4f} min={d.min():.4f} max={d.max():.4f}"


def cmd_inspect(args):
    data = _read(args.inp)
    kind = wire.peek_kind(data)
    print(f"kind={wire.KIND_NAMES[kind]}")
    print(f"version={data[len(wire.MAGIC)]}")
    if kind == wire.KIND_CIPHERTEXT:
        cts = wire.decode_ciphertexts(data)
        print(f"records={len(cts)}")
        for idx, ct in enumerate(cts[:args.max_records]):
            for name in ("u1", "u2", "e", "v"):
                print(_density_line(f"record[{idx}].{name}", getattr(ct, name)))
        return EXIT_OK
    key = wire.decode_key(data)
    pk = key if isinstance(key, cscrypt.PublicKey) else key.pk
    p = pk.params
    print(f"n={p.n}")
    print(f"k={p.k}")
    print(f"factors={p.factors}")
    print(f"hash_id={p.hash_id}")
    for name in ("M1", "M2", "c", "d", "h"):
        print(_density_line(name, getattr(pk, name)))
    if isinstance(key, cscrypt.SecretKey):
        print(_density_line("m1_inv", key.m1_inv))
        for name in ("x1", "x2", "y1", "y2", "z"):
            value = getattr(key, name)
            print(f"{name}={value}" if args.reveal else f"{name}=<hidden, {value.bit_length()} bits>")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="grcs", description="Cramer-Shoup style encryption over M3(Z7[S5]).")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("keygen", help="generate a key pair")
    p.add_argument("--out-pub", required=True)
    p.add_argument("--out-sec", required=True)
    p.add_argument("--n", type=_parse_big, default=Params.n, help="exponent range (default 10^100)")
    p.add_argument("--k", type=_positive, default=Params.k)
    p.add_argument("--factors", type=_positive, default=Params.factors)
    p.add_argument("--insecure-seed", type=int, default=None,
                   help="deterministic keys for test vectors only")
    p.set_defaults(func=cmd_keygen)

    p = sub.add_parser("encrypt", help="encrypt a file")
    p.add_argument("--pub", required=True)
    p.add_argument("--in", dest="inp", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_encrypt)

    p = sub.add_parser("decrypt", help="decrypt a file")
    p.add_argument("--sec", required=True)
    p.add_argument("--in", dest="inp", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_decrypt)

    p = sub.add_parser("encode", help="pack up to 376 bytes into a raw 1080-byte matrix")
    p.add_argument("--in", dest="inp", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_encode)

    p = sub.add_parser("decode", help="unpack a raw 1080-byte matrix")
    p.add_argument("--in", dest="inp", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_decode)

    for name, func, text in (("ddh", cmd_ddh, "M^ab vs M^c experiment"),
                             ("mask", cmd_mask, "M^a vs random N experiment")):
        p = sub.add_parser(name, help=text)
        p.add_argument("--trials", type=_positive, default=500)
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--out", default=None, help="CSV destination")
        p.add_argument("--svg", default=None, help="optional QQ scatter")
        p.add_argument("--count-mode", choices=[ddh_lab.SUPPORT, ddh_lab.COEFFICIENT], default=ddh_lab.SUPPORT)
        p.add_argument("--workers", type=_positive, default=1)
        p.add_argument("--control-runs", type=_positive, default=100)
        p.set_defaults(func=func)

    p = sub.add_parser("bench", help="time the arithmetic kernels")
    p.add_argument("--reps", type=_positive, default=5)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("inspect", help="describe a key or ciphertext file")
    p.add_argument("--in", dest="inp", required=True)
    p.add_argument("--reveal", action="store_true", help="print secret exponents")
    p.add_argument("--max-records", type=int, default=1)
    p.set_defaults(func=cmd_inspect)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"grcs: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"grcs: {exc}", file=sys.stderr)
        return EXIT_IO
    except (wire.MalformedEncoding, wire.PayloadTooLarge) as exc:
        print(f"grcs: malformed input: {exc}", file=sys.stderr)
        return EXIT_FORMAT


if __name__ == "__main__":
    sys.exit(main())
