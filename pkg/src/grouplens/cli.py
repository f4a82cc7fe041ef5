"""
Command line interface for GroupLens.
"""
import functools
import json
import logging
import sys
from pathlib import Path
from typing import Callable, Optional

import click

from grouplens.config import get_settings
from grouplens.core.catalog import load_function_file, parse_elements, resolve_group_spec
from grouplens.core.functions import hom_from_generator_images, identity_map, inversion
from grouplens.core.groups import subgroup_closure
from grouplens.core.quotients import quotient
from grouplens.errors import GroupLensError, InvariantViolationError, PreconditionError
from grouplens.schemas import Report
from grouplens.services.harness import HarnessService
from grouplens.services.selfcheck import SelfCheckService

logger = logging.getLogger(__name__)


def configure_logging(verbose: bool) -> None:
    settings = get_settings()
    level = logging.DEBUG if verbose or settings.DEBUG else getattr(logging, settings.LOG_LEVEL)
    logging.basicConfig(
        stream=sys.stderr,
        level=level,
        format="%(asctime)s %(name)s %(levelname)s %(message)s",
        force=True,
    )


def report_options(command: Callable) -> Callable:
    """--json/--pretty, --seed and --cap, shared by every subcommand."""
    command = click.option("--pretty/--json", "pretty", default=False, help="Indented or compact JSON")(command)
    command = click.option("--seed", type=int, default=None, help="Seed for sampled checks")(command)
    command = click.option("--cap", type=int, default=None, help="Enumeration cap")(command)
    return command


def emit(report: Report, pretty: bool) -> None:
    click.echo(report.model_dump_json(indent=2 if pretty else None))
    if not report.passed:
        raise SystemExit(InvariantViolationError.exit_code)


def handle_errors(command: Callable) -> Callable:
    """Library errors go to stderr as JSON and set the exit code."""

    @functools.wraps(command)
    def wrapper(*args, **kwargs):
        try:
            return command(*args, **kwargs)
        except GroupLensError as exc:
            click.echo(json.dumps(exc.to_dict(), sort_keys=True), err=True)
            raise SystemExit(exc.exit_code)

    return wrapper


@click.group()
@click.option("--verbose", is_flag=True, help="Log at DEBUG level on stderr")
def cli(verbose: bool):
    """GroupLens: exact computations with arbitrary functions between finite groups."""
    configure_logging(verbose)


@cli.command()
@click.option("--group", "group_spec", required=True, help="Group expression or JSON file")
@click.option("--prime", type=int, required=True)
@report_options
@handle_errors
def cauchy(group_spec: str, prime: int, pretty: bool, seed: Optional[int], cap: Optional[int]):
    """Find an element of order p by counting orbits of functions Z_p → G."""
    service = HarnessService(seed=seed, cap=cap)
    emit(service.cauchy(resolve_group_spec(group_spec), prime), pretty)


@cli.command()
@click.option("--group", "group_spec", required=True, help="Group expression or JSON file")
@click.option("--prime", type=int, required=True)
@report_options
@handle_errors
def sylow(group_spec: str, prime: int, pretty: bool, seed: Optional[int], cap: Optional[int]):
    """Build a Sylow p-subgroup by repeated normalizer extension."""
    service = HarnessService(seed=seed, cap=cap)
    emit(service.sylow(resolve_group_spec(group_spec), prime), pretty)


@cli.command()
@click.option("--domain", "domain_spec", required=True)
@click.option("--codomain", "codomain_spec", required=True)
@report_options
@handle_errors
def census(domain_spec: str, codomain_spec: str, pretty: bool, seed: Optional[int], cap: Optional[int]):
    """Histogram of orbit sizes over all identity-preserving functions."""
    service = HarnessService(seed=seed, cap=cap)
    emit(service.census(resolve_group_spec(domain_spec), resolve_group_spec(codomain_spec)), pretty)


@cli.command(name="transfer")
@click.option("--group", "group_spec", required=True)
@click.option("--subgroup", "subgroup_gens", required=True, help="Generators of H, indices or labels")
@click.option("--target", "target_spec", default=None, help="Abelian target A; defaults to H itself")
@click.option("--pi", "pi_values", default=None, help="Images of H's canonical generators")
@report_options
@handle_errors
def transfer_command(
    group_spec: str,
    subgroup_gens: str,
    target_spec: Optional[str],
    pi_values: Optional[str],
    pretty: bool,
    seed: Optional[int],
    cap: Optional[int],
):
    """Transfer G → A through H and π : H → A.

    Without --target, π maps H to itself and --pi gives elements of G inside
    H (identity when omitted).
    """
    g = resolve_group_spec(group_spec)
    h = subgroup_closure(g, parse_elements(g, subgroup_gens))
    local = h.as_group
    if target_spec is None:
        target = local
        images = list(local.generators) if pi_values is None else [h.to_local(x) for x in parse_elements(g, pi_values)]
    else:
        if pi_values is None:
            raise PreconditionError("--pi is required together with --target")
        target = resolve_group_spec(target_spec)
        images = parse_elements(target, pi_values)
    pi = hom_from_generator_images(local, images, target)
    service = HarnessService(seed=seed, cap=cap)
    emit(service.transfer(g, h, pi), pretty)


@cli.command(name="lift")
@click.option("--extension", "extension_spec", required=True, help="The extension H")
@click.option("--normal", "normal_gens", required=True, help="Generators of the kernel N")
@click.option(
    "--domain",
    "domain_spec",
    required=True,
    help="The group G; needed because --hom only lists images of its canonical generators",
)
@click.option("--hom", "hom_values", required=True, help="Images in H/N of G's canonical generators")
@report_options
@handle_errors
def lift_command(
    extension_spec: str,
    normal_gens: str,
    domain_spec: str,
    hom_values: str,
    pretty: bool,
    seed: Optional[int],
    cap: Optional[int],
):
    """Lift G → H/N to G → H for a soluble kernel of order prime to |G|.

    H and N come from --extension and --normal. The homomorphism G → H/N is
    given by --hom as the images of the canonical generators of G (see
    `grouplens describe --group G`), so G itself is named by --domain.
    """
    h = resolve_group_spec(extension_spec)
    n = subgroup_closure(h, parse_elements(h, normal_gens))
    domain = resolve_group_spec(domain_spec)
    q = quotient(h, n)
    f = hom_from_generator_images(domain, parse_elements(q.group, hom_values), q.group)
    service = HarnessService(seed=seed, cap=cap)
    emit(service.lift(h, n, f), pretty)


@cli.command()
@click.option("--fixture", "fixtures", multiple=True, type=click.Path(path_type=Path), help="Group or function document")
@report_options
@handle_errors
def selfcheck(fixtures: tuple[Path, ...], pretty: bool, seed: Optional[int], cap: Optional[int]):
    """Run the invariant suite over the built-in catalog."""
    service = SelfCheckService(seed=seed, cap=cap)
    emit(service.run(fixtures), pretty)


@cli.command()
@click.option("--group", "group_spec", required=True)
@report_options
@handle_errors
def describe(group_spec: str, pretty: bool, seed: Optional[int], cap: Optional[int]):
    """Elements, labels, orders and canonical generators of a group."""
    service = HarnessService(seed=seed, cap=cap)
    emit(service.describe(resolve_group_spec(group_spec)), pretty)


@cli.command()
@click.option("--function", "function_path", default=None, type=click.Path(path_type=Path))
@click.option("--group", "group_spec", default=None)
@click.option("--inversion", "use_inversion", is_flag=True, help="Use g ↦ g⁻¹ on --group")
@report_options
@handle_errors
def distributors(
    function_path: Optional[Path],
    group_spec: Optional[str],
    use_inversion: bool,
    pretty: bool,
    seed: Optional[int],
    cap: Optional[int],
):
    """Distributor census of a function file, or of inversion on a group."""
    if function_path is not None:
        f = load_function_file(function_path)
    elif group_spec is not None:
        g = resolve_group_spec(group_spec)
        f = inversion(g) if use_inversion else identity_map(g)
    else:
        raise PreconditionError("Give --function or --group")
    service = HarnessService(seed=seed, cap=cap)
    emit(service.distributors(f), pretty)


if __name__ == "__main__":
    cli()
