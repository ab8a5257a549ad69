"""``eit-sim`` command line.

Exit codes: 0 success, 1 configuration error, 2 numerical failure.
"""

from __future__ import annotations

import argparse
import logging
import sys
import warnings

from .bloch_oracle import DemodulationError, IntegrationError, oracle_chi
from .config import FREQ_UNITS, ConfigError, load_config, parse_quantity
from .lindblad import TraceDriftError, TruncationError
from .semiclassical import Route, SteadyMode, steady_state
from .sweep import run_dynamics, run_spectrum, write_dynamics, write_spectrum, write_table

log = logging.getLogger("eitsim")

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC = 0, 1, 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="eit-sim", description=__doc__.splitlines()[0].strip("`"))
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_ in [
        ("spectrum", "susceptibility sweep over the signal-pump detuning"),
        ("dynamics", "pumped vs effective master-equation populations from |g,1>"),
        ("oracle", "time-domain susceptibility with fit residuals"),
        ("steady", "print the zeroth-order steady state and dressed-state constants"),
    ]:
        p = sub.add_parser(name, help=help_)
        p.add_argument("--config", required=True, help="config file path or preset name (fig2, fig3, fig5)")
        p.add_argument("--out", help="output path (overrides [output] path)")
        p.add_argument("--format", choices=("csv", "json", "both"), help="output format")
        p.add_argument("--routes", help="comma-separated routes: full,effective,resonant,ode_oracle")
        p.add_argument("--preset", choices=("delta_eq_omega", "delta_eq_omega_minus_shift", "explicit"),
                       help="override the detuning preset")
        p.add_argument("--strict", action="store_true", help="escalate regime and truncation warnings to errors")
        p.add_argument("--threads", type=int, help="worker threads (default: $EITSIM_THREADS)")
        p.add_argument("-v", "--verbose", action="store_true")
        if name == "steady":
            p.add_argument("--delta-sig", help="signal-pump detuning for the literal mode, e.g. '1 GHz'")
    return parser


def _steady(config, args) -> int:
    p = config.params
    delta_sig = p.omega
    if args.delta_sig:
        try:
            delta_sig = parse_quantity(args.delta_sig, FREQ_UNITS)
        except ValueError as exc:
            raise ConfigError([f"--delta-sig: {exc}"]) from exc
    st = steady_state(p, delta_sig, config.steady_mode)
    print(f"delta           = {p.delta!r} GHz")
    print(f"sigma_z0        = {st.sigma_z0!r}")
    print(f"x0              = {st.x0!r}")
    print(f"sigma_m0        = {st.sigma_m0!r}")
    print(f"omega_c         = {p.effective_coupling!r} GHz")
    print(f"delta_s         = {p.energy_shift!r} GHz")
    return EXIT_OK


def _oracle(config, args) -> int:
    grid = config.grid()[:: config.oracle_stride]
    o = config.oracle
    results = oracle_chi(config.params, grid, t_end=o.t_end, dt=o.dt, window=o.window,
                         sample_every=o.sample_every)
    cols = ["delta_sig", "re_ode_oracle", "im_ode_oracle", "re_c_plus", "im_c_plus", "residual"]
    rows = [[r.delta_sig, r.chi_numeric.real, r.chi_numeric.imag,
             r.coefficient_plus.real, r.coefficient_plus.imag, r.residual] for r in results]
    meta = config.describe()
    meta.update({"t_end": o.t_end, "dt": o.dt, "window": o.window})
    for path in write_table(args.out or config.output_path or "oracle.csv", cols, rows, meta,
                            args.format or config.output_format):
        log.info("wrote %s", path)
    return EXIT_OK


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    overrides = {}
    if args.routes is not None:
        overrides[("sweep", "routes")] = args.routes
    if args.preset is not None:
        overrides[("sweep", "detuning_preset")] = args.preset
    try:
        config = load_config(args.config, overrides)
        with warnings.catch_warnings():
            if args.strict:
                warnings.simplefilter("error")
            if args.command == "steady":
                return _steady(config, args)
            if args.command == "oracle":
                return _oracle(config, args)
            if args.command == "spectrum":
                if Route.ODE_ORACLE in config.routes and config.steady_mode is not SteadyMode.CORRECTED_OMEGA:
                    log.info("ode_oracle route ignores steady_mode")
                table = run_spectrum(config, threads=args.threads, strict=args.strict)
                for path in write_spectrum(table, config, args.out, args.format):
                    log.info("wrote %s", path)
                failed = sum(1 for e in table.errors if e)
                if failed:
                    log.warning("%d grid points had route failures (see error column)", failed)
                return EXIT_OK
            results = run_dynamics(config, strict=args.strict, threads=args.threads)
            for label, comp in results.items():
                print(f"{label}: max |P_full - P_eff| = "
                      + ", ".join(f"{k} {v:.4g}" for k, v in comp.max_deviation.items()))
            for path in write_dynamics(results, config, args.out, args.format):
                log.info("wrote %s", path)
            return EXIT_OK
    except ConfigError as exc:
        for e in exc.errors:
            print(f"config error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except (ValueError, DemodulationError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (ArithmeticError, IntegrationError, TraceDriftError, TruncationError, Warning) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
