"""Command-line entry point: ``frfbands <command> ...``.

Exit codes: 0 success, 2 usage error, 3 invalid data, 4 numerical degeneracy.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .analysis import loo_membership, mean_difference_spectrum, residual, residual_spectrum
from .bootstrap import (
    DEFAULT_REPLICATES,
    band_contains,
    confidence_band,
    paired_h0_test,
    prediction_band,
    random_seed,
)
from .core import (
    STANDARD_GRID,
    DegenerateError,
    FrequencyGrid,
    FrfSet,
    Pir,
    ValidationError,
    to_fraction,
)
from .estimation import band_average, default_band_spec, estimate_raw_transfer
from .io import (
    FRF_FORMATS,
    band_from_dict,
    band_to_dict,
    dumps_result,
    file_digest,
    format_frf_set,
    format_pirs,
    parse_pirs,
    read_band_file,
    read_frf_set,
    read_time_series,
)
from .pir import default_sample_rate, full_spectrum, fundamental_period, pirs_from_frfs
from .synth import lowpass_frf, sample_population

EXIT_USAGE = 2
EXIT_DATA = 3
EXIT_DEGENERATE = 4


def _alpha(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid alpha {text!r}") from None
    if not 50 < value < 100:
        raise argparse.ArgumentTypeError("alpha is a percentage in (50, 100)")
    return value


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return value


def _phi(text: str) -> FrequencyGrid:
    try:
        return FrequencyGrid([t for t in text.replace(" ", "").split(",") if t])
    except ValidationError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _emit(text: str, out: str | None) -> None:
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def _load_frfs(path: str, phi: FrequencyGrid | None) -> FrfSet:
    frfs = read_frf_set(path)
    if phi is not None:
        if len(phi) != len(frfs.grid):
            raise ValidationError(f"--phi has {len(phi)} frequencies, file has {len(frfs.grid)}")
        frfs = FrfSet(phi, frfs.values)
    return frfs


def _provenance(args, inputs: list[str]) -> dict:
    return {
        "version": __version__,
        "command": args.command,
        "inputs": {Path(p).name: file_digest(p) for p in inputs},
    }


def _seed(args) -> int:
    return random_seed() if args.seed is None else args.seed


def _cmd_band(args) -> int:
    frfs = _load_frfs(args.frf_file, args.phi)
    seed = _seed(args)
    make = confidence_band if args.command == "confidence-band" else prediction_band
    band = make(frfs, args.alpha, args.B, seed, args.sample_rate, args.threads)
    result = band_to_dict(band)
    result["freqs"] = frfs.grid.as_text()
    if getattr(args, "query", None):
        query = _load_frfs(args.query, args.phi)
        if query.grid != frfs.grid:
            raise ValidationError("query FRFs are on a different grid")
        pirs = pirs_from_frfs(query, to_fraction(band.sample_rate))
        result["contains"] = [band_contains(band, x) for x in pirs]
    inputs = [args.frf_file] + ([args.query] if getattr(args, "query", None) else [])
    result["provenance"] = _provenance(args, inputs)
    _emit(dumps_result(result), args.out)
    return 0


def _cmd_paired(args) -> int:
    set_a = _load_frfs(args.file_a, args.phi)
    set_b = _load_frfs(args.file_b, args.phi)
    seed = _seed(args)
    test = paired_h0_test(set_a, set_b, args.alpha, args.B, seed, args.sample_rate, args.threads)
    r = residual(np.zeros(len(test.band)), test.band)
    spectrum = residual_spectrum(r, to_fraction(test.band.sample_rate), set_a.grid, complex_values=True)
    diff = mean_difference_spectrum(set_a, set_b).values
    result = {
        "reject": test.reject,
        "freqs": set_a.grid.as_text(),
        "band": band_to_dict(test.band),
        "residual": r.tolist(),
        "residual_magnitude": np.abs(spectrum).tolist(),
        "mean_difference": {"re": diff.real.tolist(), "im": diff.imag.tolist(),
                            "magnitude": np.abs(diff).tolist()},
        "provenance": _provenance(args, [args.file_a, args.file_b]),
    }
    if args.complex:
        result["residual_spectrum"] = {"re": spectrum.real.tolist(), "im": spectrum.imag.tolist()}
    _emit(dumps_result(result), args.out)
    return 0


def _cmd_loo(args) -> int:
    frfs = _load_frfs(args.frf_file, args.phi)
    seed = _seed(args)
    inside = loo_membership(frfs, args.alpha, args.B, seed, args.sample_rate, args.threads)
    result = {
        "coverage": float(inside.mean()),
        "covered": inside.tolist(),
        "alpha": args.alpha,
        "B": args.B,
        "seed": seed,
        "provenance": _provenance(args, [args.frf_file]),
    }
    _emit(dumps_result(result), args.out)
    return 0


def _cmd_pir(args) -> int:
    frfs = _load_frfs(args.frf_file, args.phi)
    rate = default_sample_rate(frfs.grid) if args.sample_rate is None else args.sample_rate
    pirs = pirs_from_frfs(frfs, rate)
    _emit(format_pirs(pirs, rate, fundamental_period(frfs.grid)), args.out)
    return 0


def _cmd_spectrum(args) -> int:
    pirs, rate = parse_pirs(Path(args.pir_file).read_text())
    rows = ["freq," + ",".join(f"member_{k}_mag,member_{k}_phase" for k in range(pirs.shape[0]))]
    spectra = [full_spectrum(Pir(x, float(rate), float(len(x) / rate))) for x in pirs]
    for j, f in enumerate(spectra[0].freqs):
        cells = [repr(float(f))]
        for s in spectra:
            cells += [repr(float(s.magnitude[j])), repr(float(s.phase[j]))]
        rows.append(",".join(cells))
    _emit("\n".join(rows) + "\n", args.out)
    return 0


def _cmd_estimate(args) -> int:
    stim = read_time_series(args.stim_file, args.sample_rate)
    resp = read_time_series(args.resp_file, args.sample_rate)
    if len(stim) != 1:
        raise ValidationError("stimulus file must hold exactly one column")
    (stimulus,) = stim.values()
    rows = []
    grid = None
    for response in resp.values():
        raw = estimate_raw_transfer(stimulus, response, args.cycle_length, args.discard_first)
        if args.bands == "none":
            values, member_grid = raw.values, FrequencyGrid(raw.rational)
        else:
            if args.bands == "default":
                spec, labels = default_band_spec(raw, args.phi or STANDARD_GRID), None
            else:
                spec, labels = read_band_file(args.bands, raw.rational)
            if args.label == "target":
                labels = labels or args.phi or STANDARD_GRID
            frf = band_average(raw, spec, labels if args.label == "target" else None)
            values, member_grid = frf.values, frf.grid
        if grid is not None and member_grid != grid:
            raise ValidationError("responses produced FRFs on different grids")
        grid = member_grid
        rows.append(values)
    _emit(format_frf_set(FrfSet(grid, rows), args.format), args.out)
    return 0


def _cmd_synth(args) -> int:
    grid = args.phi or STANDARD_GRID
    template = lowpass_frf(args.cutoff, grid, floor=args.floor)
    seed = _seed(args)
    frfs = sample_population(template, args.sigma, args.n, seed,
                             per_component=not args.modulus_noise,
                             min_phase_after_noise=args.phase_after_noise)
    if args.seed is None:
        sys.stderr.write(f"seed: {seed}\n")
    _emit(format_frf_set(frfs, args.format), args.out)
    return 0


def _cmd_plot(args) -> int:
    import json

    data = json.loads(Path(args.result_json).read_text())
    band = band_from_dict(data["band"] if "band" in data else data)
    overlay = None
    if args.overlay:
        frfs = read_frf_set(args.overlay)
        overlay = pirs_from_frfs(frfs, to_fraction(band.sample_rate))
    prefix = Path(args.out) if args.out else Path(args.result_json).with_suffix("")
    if args.format == "svg":
        from .plotting import write_svg_figures as writer
    else:
        from .plotting import write_csv_tables as writer
    for path in writer(band, prefix, overlay):
        print(path)
    return 0


def _add_band_options(p: argparse.ArgumentParser) -> None:
    p.add_argument("--alpha", type=_alpha, default=95.0, help="confidence level in percent")
    p.add_argument("--B", type=_positive_int, default=DEFAULT_REPLICATES, help="bootstrap replicates")
    p.add_argument("--seed", type=int, default=None, help="RNG seed (random and reported if omitted)")
    p.add_argument("--threads", type=_positive_int, default=None, help="worker thread cap")
    _add_common(p)


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--phi", type=_phi, default=None, help="comma-separated grid frequencies in Hz")
    p.add_argument("--sample-rate", type=to_fraction, default=None, help="PIR sample rate in Hz")
    p.add_argument("--out", default=None, help="output file (default stdout)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="frfbands", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    for name, help_ in (("confidence-band", "confidence band for the mean PIR"),
                        ("prediction-band", "prediction band for a new PIR")):
        p = sub.add_parser(name, help=help_)
        p.add_argument("frf_file")
        _add_band_options(p)
        if name == "prediction-band":
            p.add_argument("--query", default=None, help="FRF file whose members are tested against the band")
        p.set_defaults(func=_cmd_band)

    p = sub.add_parser("paired-test", help="paired H0 test on A - B via a confidence band")
    p.add_argument("file_a")
    p.add_argument("file_b")
    p.add_argument("--complex", action="store_true", help="also report the complex residual spectrum")
    _add_band_options(p)
    p.set_defaults(func=_cmd_paired)

    p = sub.add_parser("loo", help="leave-one-out coverage of the prediction band")
    p.add_argument("frf_file")
    _add_band_options(p)
    p.set_defaults(func=_cmd_loo)

    p = sub.add_parser("pir", help="PIRs of an FRF file as CSV")
    p.add_argument("frf_file")
    _add_common(p)
    p.set_defaults(func=_cmd_pir)

    p = sub.add_parser("spectrum", help="full one-sided spectrum of a PIR file")
    p.add_argument("pir_file")
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_spectrum)

    p = sub.add_parser("estimate", help="FRFs from stimulus/response recordings")
    p.add_argument("stim_file")
    p.add_argument("resp_file")
    p.add_argument("--cycle-length", type=_positive_int, required=True, help="samples per stimulus cycle")
    p.add_argument("--discard-first", action=argparse.BooleanOptionalAction, default=True)
    p.add_argument("--bands", default="default", help="'default', 'none' or a band JSON file")
    p.add_argument("--label", choices=("mean", "target"), default="mean",
                   help="label bands by their mean raw frequency or by the target grid")
    p.add_argument("--format", choices=FRF_FORMATS, default="long")
    _add_common(p)
    p.set_defaults(func=_cmd_estimate)

    p = sub.add_parser("synth", help="synthetic low-pass FRF population")
    p.add_argument("--cutoff", type=float, required=True, help="cutoff frequency in Hz")
    p.add_argument("--sigma", type=float, default=0.5, help="noise standard deviation")
    p.add_argument("--n", type=_positive_int, default=50, help="population size")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--floor", type=float, default=0.01, help="stop-band magnitude")
    p.add_argument("--modulus-noise", action="store_true",
                   help="sigma is the RMS modulus of the complex noise, not per component")
    p.add_argument("--phase-after-noise", action="store_true",
                   help="impose minimal phase on each noisy sample")
    p.add_argument("--format", choices=FRF_FORMATS, default="long")
    p.add_argument("--phi", type=_phi, default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_synth)

    p = sub.add_parser("plot", help="figure data (CSV) or SVG figures from a band result")
    p.add_argument("result_json")
    p.add_argument("--format", choices=("svg", "csv"), default="svg")
    p.add_argument("--overlay", default=None, help="FRF file whose PIRs are drawn under the band")
    p.add_argument("--out", default=None, help="output path prefix")
    p.set_defaults(func=_cmd_plot)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else 0
    try:
        return args.func(args)
    except DegenerateError as exc:
        sys.stderr.write(f"frfbands: numerical degeneracy: {exc}\n")
        return EXIT_DEGENERATE
    except ValidationError as exc:
        sys.stderr.write(f"frfbands: invalid data: {exc}\n")
        return EXIT_DATA
    except OSError as exc:
        sys.stderr.write(f"frfbands: {exc}\n")
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
