# Copyright 2026 The cappen Authors. All rights reserved.
#
# Licensed under the Apache License, Version 2.0 (the "License"); you may not
# use this file except in compliance with the License.  You may obtain a copy of
# the License at
#
# http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
# WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.  See the
# License for the specific language governing permissions and limitations under
# the License.

"""The capillary-penrose command line.

    capillary-penrose <mass|sweep|verify|flux> --config FILE [FILE ...]
        [--out DIR] [--jobs N] [--verbose]

Every command writes its report into the output directory and returns one of
the lexicon.EXIT_* codes.
"""
from __future__ import print_function
from __future__ import unicode_literals

import argparse
from concurrent import futures
import io
import logging
import os
import sys

from cappen import axisym_oracle
from cappen import capillary_energy
from cappen import config as config_lib
from cappen import errors
from cappen import flux_neck
from cappen import geom_mesh
from cappen import lexicon
from cappen import plots
from cappen import remesh
from cappen import reporting
from cappen import solver
from cappen import stability
from cappen import support_surface

LOGGER = logging.getLogger("cappen")

# A converged component may fall this far below the isoperimetric bound.
ISOPERIMETRIC_SLACK = 1e-2
GAUSS_BONNET_TOL = 1e-9
# kappa >= -KAPPA_SLACK / h^2 with h the mean edge length.
KAPPA_SLACK = 1e-3


def configure_logging(verbose=False):
    name = os.environ.get(lexicon.LOG_ENV, "WARNING").upper()
    level = getattr(logging, name, None)
    if not isinstance(level, int):
        level = logging.WARNING
    if verbose:
        level = min(level, logging.INFO)
    logging.basicConfig(
        level=level, format="%(asctime)s %(levelname)s %(name)s: %(message)s")


def _OutputDir(config, out):
    path = out or config["output.dir"]
    if not os.path.isdir(path):
        os.makedirs(path)
    return path


def _Open(directory, name):
    return io.open(os.path.join(directory, name), "w", encoding="utf-8",
                   newline="")


def _Seed(config, support, level=None):
    if level is None:
        level = config["solver.seed_height"]
    return solver.default_seed(support, config["mesh.boundary_vertices"],
                               config["mesh.rings"], level)


def cmd_mass(config, out=None):
    surface = support_surface.surface_from_config(config)
    estimate = support_surface.exterior_mass(surface, config["mass.radii"])
    h_min = support_surface.mean_curvature_sign_report(surface)
    summary = reporting.mass_summary(estimate, h_min,
                                     support_surface.is_plane(surface))

    print("m = %.10g (residual %.3g)" % (estimate.mass, estimate.residual))
    for radius, value in zip(estimate.radii, estimate.values):
        print("\tI(%g) = %.12g" % (radius, value))
    for warning in estimate.warnings:
        print("\twarning: %s" % warning)

    with _Open(_OutputDir(config, out), lexicon.MASS_SUMMARY) as fd:
        reporting.write_json(summary, fd)
    return lexicon.EXIT_OK


def _Kappa(state):
    try:
        return stability.min_eigenpair(state)[0]
    except (errors.EigenSolverError, errors.ResolutionError) as e:
        LOGGER.warning("No stability eigenvalue at t = %g: %s", state.t, e)
        return None


def cmd_sweep(config, out=None):
    support = support_surface.surface_from_config(config)
    directory = _OutputDir(config, out)
    partial = False
    try:
        records = solver.continuation_sweep(
            support, config.TGrid(), config.SolverOptions(),
            seed=_Seed(config, support), eigenvalue=_Kappa)
    except errors.NonConvergenceError as e:
        LOGGER.error("Sweep stopped: %s", e)
        records = getattr(e, "records", [])
        partial = True
    except errors.CollapseError as e:
        LOGGER.error("Sweep collapsed: %s", e)
        records = getattr(e, "records", [])
        partial = True

    with _Open(directory, lexicon.SWEEP_CSV) as fd:
        reporting.write_sweep_csv(records, fd)
    if not records:
        return lexicon.EXIT_NON_CONVERGENCE

    mass = support_surface.exterior_mass(support, config["mass.radii"])
    h_min = support_surface.mean_curvature_sign_report(support)
    checks = []
    if len(records) >= 3:
        checks = stability.sweep_profile_checks(
            solver.profile_samples(records), mass=max(mass.mass, records[0].mf))
    summary = reporting.sweep_summary(
        records, mass, h_min, checks, partial=partial,
        plane=support_surface.is_plane(support))
    with _Open(directory, lexicon.SWEEP_SUMMARY) as fd:
        reporting.write_json(summary, fd)
    if config["output.plots"]:
        plots.plot_sweep(records, directory, mass.mass)

    print("m_f(0) = %.8g, max m_f = %.8g, m = %.8g" % (
        summary["mf0"], summary["max_mf"], summary["mass"]))
    print("Penrose margin %.6g (weak %.6g)" % (
        summary["penrose_margin"], summary["weak_margin"]))
    print("%s monotonicity (largest drop %.3g)%s" % (
        summary["monotonicity"], summary["largest_drop"],
        ", hypothesis violated" if summary["hypothesis_violated"] else ""))

    if partial:
        return lexicon.EXIT_NON_CONVERGENCE
    if summary["monotonicity"] != lexicon.PASS:
        return lexicon.EXIT_MONOTONICITY_FAIL
    return lexicon.EXIT_OK


def _StructuralChecks(state, tol_angle, listener):
    mesh = state.mesh
    residual = geom_mesh.gauss_bonnet_residual(mesh)
    listener.onCheck("gauss_bonnet_residual", residual <= GAUSS_BONNET_TOL,
                     residual, GAUSS_BONNET_TOL)
    for k in range(mesh.n_components):
        component = mesh.Component(k)
        chi = component.EulerCharacteristic()
        listener.onCheck("euler_characteristic[%d]" % k, chi == 1, chi, 1)
        ratio = geom_mesh.isoperimetric_ratio(component)
        listener.onCheck("isoperimetric_ratio[%d]" % k,
                         ratio >= 1 - ISOPERIMETRIC_SLACK, ratio,
                         1 - ISOPERIMETRIC_SLACK)
    contact = capillary_energy.contact_residual(state)
    listener.onCheck("contact_residual", contact < tol_angle, contact,
                     tol_angle)
    coarse = solver.coarse_area_ratio(state)
    bound = 1 + lexicon.COARSE_AREA_EPS
    listener.onCheck("coarse_area_ratio", coarse <= bound, coarse, bound)


def _StabilityChecks(state, form, listener):
    h = remesh.mean_edge_length(state.mesh)
    floor = -KAPPA_SLACK / h ** 2
    try:
        kappa, f = stability.min_eigenpair(state, form)
    except errors.EigenSolverError as e:
        LOGGER.error("%s", e)
        listener.onCheck("min_eigenvalue", False, None, floor)
        return None
    listener.onCheck("min_eigenvalue", kappa >= floor, kappa, floor)
    lowest = float(f[form.free].min())
    listener.onCheck("eigenfunction_positive", lowest > 0, lowest, 0.0)
    return kappa


def _VariationChecks(state, form, count, seed, listener):
    directions = stability.variation_directions(state, count, seed=seed)
    for i, f in enumerate(directions):
        report = stability.fd_variation_check(state, f, form=form)
        name = "variation[%d]" % i
        listener.onCheck(name + ".area_first", min(report.area_first) <
                         lexicon.FD_FIRST_TOL, min(report.area_first),
                         lexicon.FD_FIRST_TOL, report.orders)
        listener.onCheck(name + ".lateral_first", min(report.lateral_first) <
                         lexicon.FD_FIRST_TOL, min(report.lateral_first),
                         lexicon.FD_FIRST_TOL)
        listener.onCheck(name + ".second_consistency",
                         report.second < lexicon.FD_SECOND_TOL, report.second,
                         lexicon.FD_SECOND_TOL)
        listener.onCheck(name + ".jacobi_form",
                         report.form < report.form_tolerance, report.form,
                         report.form_tolerance)
        listener.onCheck(name + ".form_cross_check", report.cross_check <
                         lexicon.FORM_CROSS_CHECK_TOL, report.cross_check,
                         lexicon.FORM_CROSS_CHECK_TOL)


def _OracleCheck(state, region, listener):
    if getattr(state.support, "profile", None) is None:
        listener.onSkip("oracle_agreement",
                        "support is not a surface of revolution")
        return
    try:
        candidate = axisym_oracle.axisym_solve(state.support, state.t,
                                               region=region)
    except errors.NoAxisymmetricCandidateError as e:
        listener.onSkip("oracle_agreement", str(e))
        return
    agreement = axisym_oracle.oracle_agreement(state, candidate)
    listener.onCheck("oracle_agreement", agreement.passed, max(
        agreement.area_error, agreement.lateral_error,
        agreement.energy_error), axisym_oracle.ORACLE_TOL)


def cmd_verify(config, out=None):
    support = support_surface.surface_from_config(config)
    t = config["verify.t"]
    level = config["solver.seed_height"]
    if level is None and support.sweep_period is not None:
        level = t * support.length_scale
    region = solver.default_region(support)
    try:
        state = solver.minimize(t, _Seed(config, support, level), support,
                                config.SolverOptions(), region=region)
        form = stability.JacobiForm(state)
        listener = reporting.VerificationListener()
        _StructuralChecks(state, config["solver.tol_angle"], listener)
        kappa = _StabilityChecks(state, form, listener)
        _VariationChecks(state, form, config["verify.directions"],
                         config["run.seed"], listener)
        _OracleCheck(state, region, listener)
        prediction = stability.profile_second_derivative(state)
    except (errors.ResolutionError, errors.DegeneracyError) as e:
        suggestion = getattr(e, "suggestion", None)
        print("Resolution error: %s%s" % (
            e, "; %s" % suggestion if suggestion else ""))
        return lexicon.EXIT_RESOLUTION

    for line in listener.Lines():
        print(line)
    with _Open(_OutputDir(config, out), lexicon.VERIFY_REPORT) as fd:
        listener.Dump(fd, t=t, area=state.area,
                      lateral_area=state.lateral_area, kappa=kappa,
                      profile_second_derivative=prediction.value,
                      config=config.AsDict())
    if listener.passed:
        return lexicon.EXIT_OK
    return lexicon.EXIT_VERIFY_FAIL


def cmd_flux(config, out=None):
    surface = flux_neck.TwoSidedSurface.FromConfig(config)
    first = config["flux.radius"]
    second = config["flux.second_radius"]
    if second <= first:
        raise errors.ConfigError(
            "flux.second_radius must exceed flux.radius.")
    radii = (first, 0.5 * (first + second), second)

    options = config.SolverOptions()
    neck = flux_neck.neck_size(surface, options,
                               config["mesh.boundary_vertices"],
                               config["mesh.rings"])
    report = flux_neck.characterization_report(surface, radii, options,
                                               neck=neck)
    ends = flux_neck.describe_ends(surface, radii)
    homotopy = [flux_neck.flux_homotopy_check(
        end, flux_neck.circle_loop(first), flux_neck.circle_loop(second))
        for end in ends]
    summary = reporting.flux_summary(report, ends, homotopy)
    with _Open(_OutputDir(config, out), lexicon.FLUX_SUMMARY) as fd:
        reporting.write_json(summary, fd)

    print("Largest flux %.8g, neck size %.8g: %s" % (
        report.largest_flux, report.neck_size, report.verdict))
    if not report.plane:
        print("\tthe neck size is an upper bound")
    return lexicon.EXIT_OK


COMMANDS = {
    "mass": cmd_mass,
    "sweep": cmd_sweep,
    "verify": cmd_verify,
    "flux": cmd_flux,
}


def run_config(command, path, out=None):
    """Runs one command on one configuration file; returns the exit code."""
    try:
        config = config_lib.ExperimentConfig.FromFile(path)
        return COMMANDS[command](config, out)
    except (errors.ConfigError, errors.DomainError, errors.RegionError) as e:
        print("%s: %s" % (path, e), file=sys.stderr)
        return lexicon.EXIT_BAD_CONFIG
    except (IOError, OSError) as e:
        print("%s: %s" % (path, e), file=sys.stderr)
        return lexicon.EXIT_BAD_CONFIG
    except (errors.ResolutionError, errors.DegeneracyError) as e:
        print("%s: %s" % (path, e), file=sys.stderr)
        return lexicon.EXIT_RESOLUTION
    except (errors.NonConvergenceError, errors.CollapseError,
            errors.TangencyError, errors.ProjectionError,
            errors.TopologyError, errors.AdmissibilityError) as e:
        print("%s: %s" % (path, e), file=sys.stderr)
        return lexicon.EXIT_NON_CONVERGENCE


def _BatchOutput(path, out, count):
    if count == 1:
        return out
    stem = os.path.splitext(os.path.basename(path))[0]
    return os.path.join(out or ".", stem)


def main(argv=None):
    parser = argparse.ArgumentParser(
        prog="capillary-penrose",
        description="Capillary surfaces and the extrinsic Penrose "
        "inequality.")
    parser.add_argument("command", choices=sorted(COMMANDS),
                        help="the experiment to run")
    parser.add_argument("--config", nargs="+", required=True,
                        help="one or more configuration files")
    parser.add_argument("--out", default=None,
                        help="output directory (default: output.dir)")
    parser.add_argument("--jobs", type=int, default=1,
                        help="run several configurations in parallel")
    parser.add_argument("--verbose", action="store_true",
                        help="enable verbose output")
    args = parser.parse_args(argv)
    configure_logging(args.verbose)

    paths = args.config
    outs = [_BatchOutput(p, args.out, len(paths)) for p in paths]
    if args.jobs > 1 and len(paths) > 1:
        with futures.ProcessPoolExecutor(max_workers=args.jobs) as pool:
            codes = list(pool.map(run_config, [args.command] * len(paths),
                                  paths, outs))
    else:
        codes = [run_config(args.command, p, o) for p, o in zip(paths, outs)]
    return max(codes)


if __name__ == "__main__":
    sys.exit(main())
