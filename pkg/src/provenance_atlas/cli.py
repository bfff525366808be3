"""Operator command line: validate, ingest, export, bundle, serve.

All commands are deterministic for identical inputs: normalized JSON is
written with sorted keys and grids with stable label orders, so output bytes
and digests can be compared across runs. PROVENANCE_ATLAS_CONFIG may point
to a JSON file providing defaults for any flag.
"""

from __future__ import annotations

import json
import os
import sys
from pathlib import Path
from typing import Optional

import click

from .bundling import Projection, bundle_at_level, segments_from_transfers
from .core import SEVERITY_ERROR, Copy, Edition
from .dataset import Dataset, build_dataset, canonical_bytes, snapshot_digest
from .gazetteer import Gazetteer, builtin_gazetteer, load_gazetteer_file
from .heatmaps import (
    DEFAULT_BUCKET_WIDTH,
    GridOrdering,
    flatten_transfers,
    location_heatmap,
    od_matrix,
    time_heatmap,
)
from .ingest import IngestReport, MalformedDocumentError, parse_dataset
from .service import ServeConfig, serve

CONFIG_ENV = "PROVENANCE_ATLAS_CONFIG"
_CONFIG_KEYS = ("dataset", "gazetteer", "bucket", "level", "listen", "out")


def _config_defaults() -> dict:
    path = os.environ.get(CONFIG_ENV)
    if not path:
        return {}
    try:
        with open(path, encoding="utf-8") as handle:
            raw = json.load(handle)
    except (OSError, json.JSONDecodeError) as exc:
        raise click.ClickException(f"cannot read config {path!r}: {exc}")
    return {k: raw[k] for k in _CONFIG_KEYS if k in raw}


def _load_gazetteer(path: Optional[str]) -> Gazetteer:
    if path is None:
        return builtin_gazetteer()
    return load_gazetteer_file(path)


def _load(dataset_path: str, gazetteer_path: Optional[str]) -> tuple[
        list[Edition], list[Copy], IngestReport]:
    gaz = _load_gazetteer(gazetteer_path)
    try:
        content = Path(dataset_path).read_bytes()
    except OSError as exc:
        raise click.ClickException(str(exc))
    try:
        return parse_dataset(content, gaz)
    except MalformedDocumentError as exc:
        raise click.ClickException(str(exc))


_dataset_option = click.option("--dataset", required=True, type=click.Path(),
                               help="Path to the ingest JSON document.")
_gazetteer_option = click.option("--gazetteer", default=None, type=click.Path(),
                                 help="Gazetteer CSV; the built-in one is used when omitted.")
_out_option = click.option("--out", required=True, type=click.Path(),
                           help="Output directory (created if absent).")


@click.group()
@click.pass_context
def main(ctx: click.Context) -> None:
    """Provenance trajectory engine for printed-book movement data."""
    defaults = _config_defaults()
    if defaults:
        ctx.default_map = {
            cmd: dict(defaults) for cmd in ("validate", "ingest", "export", "bundle", "serve")
        }


@main.command()
@_dataset_option
@_gazetteer_option
def validate(dataset: str, gazetteer: Optional[str]) -> None:
    """Check a dataset; exit 0 only when no error-severity findings exist."""
    _, _, report = _load(dataset, gazetteer)
    errors = warnings = 0
    for finding in report.findings:
        if finding.severity == SEVERITY_ERROR:
            errors += 1
        else:
            warnings += 1
        where = finding.record_id
        if finding.provenance_index is not None:
            where += f"#{finding.provenance_index}"
        click.echo(f"{finding.severity}: {finding.rule} at {where}: {finding.message}")
    click.echo(f"{errors} errors, {warnings} warnings")
    if errors:
        sys.exit(1)


def _write_report(report: IngestReport, path: Path) -> None:
    doc = {
        "copies_loaded": report.copies_loaded,
        "provenances_loaded": report.provenances_loaded,
        "unresolved_places": [list(entry) for entry in report.unresolved_places],
        "findings": [
            {
                "severity": f.severity,
                "rule": f.rule,
                "record_id": f.record_id,
                "provenance_index": f.provenance_index,
                "message": f.message,
            }
            for f in report.findings
        ],
    }
    path.write_text(json.dumps(doc, indent=2, sort_keys=True, ensure_ascii=False) + "\n",
                    encoding="utf-8")


def _write_normalized(editions: list[Edition], copies: list[Copy], path: Path) -> None:
    payload = json.loads(canonical_bytes(editions, copies))
    path.write_text(json.dumps(payload, indent=2, sort_keys=True, ensure_ascii=False) + "\n",
                    encoding="utf-8")


@main.command()
@_dataset_option
@_gazetteer_option
@_out_option
def ingest(dataset: str, gazetteer: Optional[str], out: str) -> None:
    """Parse and geocode a dataset; write the normalized document and report."""
    editions, copies, report = _load(dataset, gazetteer)
    out_dir = Path(out)
    out_dir.mkdir(parents=True, exist_ok=True)
    _write_normalized(editions, copies, out_dir / "normalized.json")
    _write_report(report, out_dir / "report.json")
    click.echo(f"loaded {report.copies_loaded} copies, "
               f"{report.provenances_loaded} provenances, "
               f"{len(report.unresolved_places)} unresolved places")
    click.echo(f"digest {snapshot_digest(editions, copies)}")


@main.command()
@_dataset_option
@_gazetteer_option
@_out_option
@click.option("--bucket", default=DEFAULT_BUCKET_WIDTH, type=click.IntRange(min=1),
              help="Time heatmap bucket width in years.")
def export(dataset: str, gazetteer: Optional[str], out: str, bucket: int) -> None:
    """Write the three heatmap grids, the flat transfer list, and the normalized dataset."""
    editions, copies, _ = _load(dataset, gazetteer)
    ds = build_dataset(editions, copies)
    out_dir = Path(out)
    out_dir.mkdir(parents=True, exist_ok=True)

    transfers = flatten_transfers(ds)
    (out_dir / "od_instances.csv").write_text(
        od_matrix(transfers, GridOrdering.FREQUENCY).to_csv(), encoding="utf-8")
    (out_dir / "copy_time.csv").write_text(
        time_heatmap(ds, bucket).to_csv(), encoding="utf-8")
    (out_dir / "copy_location.csv").write_text(
        location_heatmap(ds).to_csv(), encoding="utf-8")

    lines = ["copy_id,j,from_country,to_country,interval_start,interval_end,"
             "consistent,from_lat,from_lon,to_lat,to_lon"]
    for t in transfers:
        lines.append(",".join([
            t.copy_id,
            str(t.order_index),
            t.from_country or "",
            t.to_country or "",
            str(t.interval[0]) if t.interval else "",
            str(t.interval[1]) if t.interval else "",
            str(t.consistent).lower(),
            repr(t.from_geo.lat) if t.from_geo else "",
            repr(t.from_geo.lon) if t.from_geo else "",
            repr(t.to_geo.lat) if t.to_geo else "",
            repr(t.to_geo.lon) if t.to_geo else "",
        ]))
    (out_dir / "transfers.csv").write_text("\n".join(lines) + "\n", encoding="utf-8")

    _write_normalized(editions, copies, out_dir / "normalized.json")
    click.echo(f"wrote 4 csv files and normalized.json to {out_dir}")
    click.echo(f"digest {ds.digest}")


@main.command()
@_dataset_option
@_gazetteer_option
@_out_option
@click.option("--level", required=True, type=click.IntRange(0, 4),
              help="Bundling strength preset, 0 (straight) to 4 (maximum).")
def bundle(dataset: str, gazetteer: Optional[str], out: str, level: int) -> None:
    """Write bundled transfer geometry (lat/lon polylines) at one preset."""
    editions, copies, _ = _load(dataset, gazetteer)
    ds = build_dataset(editions, copies)
    geo_points = [p.geo for c in ds.copies for p in c.provenances if p.geo is not None]
    projection = Projection.fit(geo_points)
    segments = segments_from_transfers(flatten_transfers(ds), projection)
    polylines = bundle_at_level(segments, level)
    doc = {
        "level": level,
        "digest": ds.digest,
        "polylines": [
            {
                "copy_id": poly.id[0],
                "j": poly.id[1],
                "points": [list(projection.unproject(p)) for p in poly.points],
            }
            for poly in polylines
        ],
    }
    out_dir = Path(out)
    out_dir.mkdir(parents=True, exist_ok=True)
    target = out_dir / f"bundle_level_{level}.json"
    target.write_text(json.dumps(doc, sort_keys=True, ensure_ascii=False) + "\n",
                      encoding="utf-8")
    click.echo(f"wrote {target} ({len(polylines)} polylines)")


@main.command("serve")
@_dataset_option
@_gazetteer_option
@click.option("--listen", default="127.0.0.1:8000", help="HOST:PORT to bind.")
@click.option("--bucket", default=DEFAULT_BUCKET_WIDTH, type=click.IntRange(min=1))
def serve_cmd(dataset: str, gazetteer: Optional[str], listen: str, bucket: int) -> None:
    """Run the read-only HTTP API over the dataset."""
    editions, copies, _ = _load(dataset, gazetteer)
    ds = build_dataset(editions, copies)
    host, _, port_text = listen.rpartition(":")
    if not host or not port_text.isdigit():
        raise click.UsageError(f"--listen must be HOST:PORT, got {listen!r}")
    try:
        serve(ds, ServeConfig(host=host, port=int(port_text), bucket_width=bucket))
    except Exception as exc:  # validation or bind failures end the run cleanly
        raise click.ClickException(str(exc))


if __name__ == "__main__":
    main()
