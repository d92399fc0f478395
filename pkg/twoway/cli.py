"""
Command-line front end.

    python -m twoway capacity lossy:eta=0.5
    python -m twoway sweep lossy --distance-km --from 0 --to 500 --points 101 --series capacity,tgw,bb84-1ph
    python -m twoway verify-limit thermal-loss:eta=0.8,nbar=0.5 --mu 100,1000,10000
    python -m twoway telesim-check dephasing:p=0.3
    python -m twoway qkd-rate no-switching --distance-km 50

Exit codes: 0 ok, 2 parse error, 3 domain error, 4 verification failure.
"""
from typing import List, Optional
import argparse
import json
import logging
import sys

from pydantic import ValidationError

from twoway import __version__
from twoway.core.errors import DomainError, ParseError, VerificationError
from twoway.models.bounds import CapacityEngine, flux_limit_rows, limit_rows_pass
from twoway.models.channels import check_channel_stretch
from twoway.models.composition import (
    fading_report,
    km_to_eta,
    multiband,
    parse_bands,
    parse_ensemble,
    two_way_pair,
)
from twoway.models.qkd_rates import rate_with_flag
from twoway.models.sweeps import run_sweep, write_table
from twoway.schemas.channel import parse_channel_spec
from twoway.schemas.protocol import parse_protocol
from twoway.schemas.report import BoundReport, SweepConfig, extended_real

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_DOMAIN = 3
EXIT_VERIFICATION = 4


def _fmt(value: Optional[float]) -> str:
    return "not computed" if value is None else f"{value:.12g}"


def _print_report(report: BoundReport, as_json: bool) -> None:
    if as_json:
        print(report.model_dump_json(indent=2))
        return
    print(f"lower    = {_fmt(report.lower)}  ({report.lower_name})")
    print(f"upper    = {_fmt(report.upper)}  ({report.upper_name})")
    print(f"exact    = {str(report.exact).lower()}")
    if report.exact:
        print(f"capacity = {_fmt(report.capacity)}")
    if report.clamped:
        print(f"note     : lower bound clamped from {_fmt(report.raw_lower)}")


def cmd_capacity(args: argparse.Namespace) -> int:
    if args.compose == "fading":
        report = fading_report(parse_ensemble(args.spec))
    elif args.compose == "pair":
        bands = parse_bands(args.spec)
        if len(bands) != 2:
            raise DomainError(f"A channel pair needs exactly two specs, got {len(bands)}")
        report = two_way_pair(*bands)
    elif args.compose == "multiband":
        report = multiband(parse_bands(args.spec))
    else:
        report = CapacityEngine().evaluate(args.spec)
    _print_report(report, args.format == "json")
    return EXIT_OK


def _series(text: str) -> List[str]:
    return [s.strip() for s in text.split(",") if s.strip()]


def cmd_sweep(args: argparse.Namespace) -> int:
    try:
        cfg = SweepConfig(
            spec=args.spec,
            axis=args.axis,
            start=args.start,
            stop=args.stop,
            points=args.points,
            distance_mode=args.distance_km,
            fmt=args.format,
            out=args.out,
            series=_series(args.series),
            mbar=args.mbar,
        )
    except ValidationError as e:
        raise DomainError(f"Invalid sweep: {e.errors()[0]['msg']}") from e
    table = run_sweep(cfg)
    text = write_table(table, cfg.fmt, cfg.out)
    if not cfg.out:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")
    return EXIT_OK


def _numbers(text: str) -> List[float]:
    values, position = [], 0
    for token in text.split(","):
        try:
            values.append(float(token))
        except ValueError:
            raise ParseError(f"Expected a number, got '{token.strip()}'", position)
        position += len(token) + 1
    return values


def cmd_verify_limit(args: argparse.Namespace) -> int:
    mu_list = _numbers(args.mu) if args.mu else None
    rows = flux_limit_rows(parse_channel_spec(args.spec), mu_list)
    print("mu,numeric,closed_form,diff,diff_times_mu")
    for r in rows:
        print(",".join(f"{v:.12g}" for v in (r.mu, r.numeric, r.closed_form, r.diff, r.scaled)))
    if not limit_rows_pass(rows):
        raise VerificationError(f"|diff|·μ does not stay bounded for {args.spec}")
    return EXIT_OK


def cmd_telesim_check(args: argparse.Namespace) -> int:
    report = check_channel_stretch(parse_channel_spec(args.spec))
    print(f"covariant = {'yes' if report.covariant else 'no'}")
    if report.covariant:
        print(f"distance  = {report.distance:.3e}")
        print(f"passed    = {'yes' if report.passed else 'no'}")
        if not report.passed:
            raise VerificationError(f"Choi roundtrip distance {report.distance:.3e} is too large")
    return EXIT_OK


def cmd_qkd_rate(args: argparse.Namespace) -> int:
    protocol = parse_protocol(args.protocol)
    eta = km_to_eta(args.distance_km) if args.distance_km is not None else args.eta
    if eta is None:
        raise DomainError("Give --eta or --distance-km")
    rate, clamped = rate_with_flag(protocol, eta)
    if args.format == "json":
        payload = {"protocol": protocol.token, "eta": eta, "rate": extended_real(rate), "clamped": clamped}
        print(json.dumps(payload, allow_nan=False))
    else:
        print(f"{protocol.token} eta={eta:.12g} rate={rate:.12g}" + (" (clamped)" if clamped else ""))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="twoway", description="Two-way assisted capacities of quantum channels"
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("capacity", help="bounds for one channel or a composed scenario")
    p.add_argument("spec", help="family:key=value,... (';'-separated for --compose)")
    p.add_argument("--compose", choices=["single", "fading", "pair", "multiband"], default="single")
    p.add_argument("--format", choices=["text", "json"], default="text")
    p.set_defaults(handler=cmd_capacity)

    p = sub.add_parser("sweep", help="table of bounds/rates over a parameter grid")
    p.add_argument("spec", help="channel spec without the swept parameter, or a protocol token")
    p.add_argument("--axis", default=None, help="parameter to sweep (default per family)")
    p.add_argument("--from", dest="start", type=float, required=True)
    p.add_argument("--to", dest="stop", type=float, required=True)
    p.add_argument("--points", type=int, default=101)
    p.add_argument("--distance-km", action="store_true", help="sweep km at 0.2 dB/km instead of η")
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--out", default=None)
    p.add_argument("--series", default="lower,upper")
    p.add_argument("--mbar", type=float, default=None, help="mean photon number for constrained series")
    p.set_defaults(handler=cmd_sweep)

    p = sub.add_parser("verify-limit", help="finite-μ flux against its closed form")
    p.add_argument("spec")
    p.add_argument("--mu", default=None, help="comma-separated μ values")
    p.set_defaults(handler=cmd_verify_limit)

    p = sub.add_parser("telesim-check", help="teleportation-covariance and Choi roundtrip")
    p.add_argument("spec")
    p.set_defaults(handler=cmd_telesim_check)

    p = sub.add_parser("qkd-rate", help="ideal key rate of a benchmark protocol")
    p.add_argument("protocol")
    p.add_argument("--eta", type=float, default=None)
    p.add_argument("--distance-km", type=float, default=None)
    p.add_argument("--format", choices=["text", "json"], default="text")
    p.set_defaults(handler=cmd_qkd_rate)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.handler(args)
    except ParseError as e:
        logger.error(f"❌ Parse error: {e}")
        return EXIT_PARSE
    except DomainError as e:
        logger.error(f"❌ {type(e).__name__}: {e}")
        return EXIT_DOMAIN
    except VerificationError as e:
        logger.error(f"❌ Verification failed: {e}")
        return EXIT_VERIFICATION
