"""CSV ingestion, grid layout files and output serialization.

Every output file embeds (config_hash, seed, version) so a bundle can be
reproduced exactly; nothing here reads clocks or environment entropy.
"""

from __future__ import annotations

import csv
import hashlib
import json
from importlib import resources
from pathlib import Path

import numpy as np

from . import __version__
from .core import Axis, ChannelId, TimeSeriesMatrix
from .errors import DuplicateChannel, EmptyFile, ParseError
from .omii import DegreeDistribution, Edge, InteractionNetwork
from .spatial import MIMapDiff, NetworkDiff, PairwiseMIMap, SensorGrid

_REJECTED_TOKENS = {"nan", "inf", "-inf", "+inf", "infinity", "-infinity", "+infinity"}


def read_timeseries_csv(path) -> TimeSeriesMatrix:
    """Parse a scenario CSV: header of s<index>_<lat|vert> names, one row per sample."""
    path = Path(path)
    with path.open(newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise EmptyFile(f"{path} is empty") from None
        channels = []
        for col, name in enumerate(header, start=1):
            try:
                channels.append(ChannelId.from_name(name.strip()))
            except ValueError as exc:
                raise ParseError(1, col, str(exc)) from None
        if len(set(channels)) != len(channels):
            raise DuplicateChannel(f"{path} repeats a channel name")
        rows = []
        for line_no, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != len(channels):
                raise ParseError(
                    line_no, 1, f"expected {len(channels)} cells, got {len(row)}"
                )
            parsed = []
            for col, cell in enumerate(row, start=1):
                token = cell.strip()
                if token.lower() in _REJECTED_TOKENS:
                    raise ParseError(line_no, col, f"non-finite cell {token!r}")
                try:
                    parsed.append(float(token))
                except ValueError:
                    raise ParseError(
                        line_no, col, f"non-numeric cell {token!r}"
                    ) from None
            rows.append(parsed)
    if not rows:
        raise EmptyFile(f"{path} has a header but no data rows")
    return TimeSeriesMatrix(np.asarray(rows), tuple(channels))


def write_timeseries_csv(x: TimeSeriesMatrix, path) -> None:
    path = Path(path)
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow([ch.name for ch in x.channels])
        for row in x.data:
            writer.writerow([repr(float(v)) for v in row])


def load_grid_csv(path) -> SensorGrid:
    """Grid layout file: header sensor_index,row,col then one sensor per row."""
    path = Path(path)
    with path.open(newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise EmptyFile(f"{path} is empty") from None
        if [h.strip().lower() for h in header] != ["sensor_index", "row", "col"]:
            raise ParseError(1, 1, "expected header sensor_index,row,col")
        positions = {}
        for line_no, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != 3:
                raise ParseError(line_no, 1, "expected 3 cells")
            try:
                sensor, r, c = (int(cell) for cell in row)
            except ValueError:
                raise ParseError(line_no, 1, f"non-integer cell in {row}") from None
            if sensor in positions:
                raise ParseError(line_no, 1, f"sensor {sensor} listed twice")
            positions[sensor] = (r, c)
    if not positions:
        raise EmptyFile(f"{path} has no sensors")
    return SensorGrid(positions)


def bundled_grid_path() -> Path:
    """Packaged 30-sensor (6 rows x 5 cols) layout."""
    return Path(resources.files("miinet") / "data" / "grid_6x5.csv")


def load_bundled_grid() -> SensorGrid:
    return load_grid_csv(bundled_grid_path())


def config_hash(config: dict) -> str:
    canon = json.dumps(config, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canon.encode()).hexdigest()


def provenance(config: dict, seed: int) -> dict:
    return {
        "config_hash": config_hash(config),
        "seed": int(seed),
        "version": __version__,
    }


def _csv_provenance_lines(prov: dict) -> list[str]:
    return [f"# {key}={prov[key]}" for key in ("config_hash", "seed", "version")]


def write_json(payload: dict, path) -> None:
    Path(path).write_text(json.dumps(payload, sort_keys=True, indent=2) + "\n")


def network_to_payload(net: InteractionNetwork, prov: dict) -> dict:
    return {
        "provenance": prov,
        "metadata": net.metadata,
        "nodes": [
            {"index": idx, "name": name}
            for idx, name in zip(net.nodes, net.node_names)
        ],
        "edges": [
            {
                "source": e.source,
                "target": e.target,
                "source_name": net.node_names[net.nodes.index(e.source)],
                "target_name": net.node_names[net.nodes.index(e.target)],
                "weight": e.weight,
                "threshold": e.threshold,
            }
            for e in net.edges
        ],
    }


def network_from_payload(payload: dict) -> InteractionNetwork:
    nodes = tuple(n["index"] for n in payload["nodes"])
    names = tuple(n["name"] for n in payload["nodes"])
    edges = tuple(
        Edge(e["source"], e["target"], e["weight"], e.get("threshold", 0.0))
        for e in payload["edges"]
    )
    return InteractionNetwork(nodes, names, edges, dict(payload.get("metadata", {})))


def write_network_json(net: InteractionNetwork, prov: dict, path) -> None:
    write_json(network_to_payload(net, prov), path)


def read_network_json(path) -> InteractionNetwork:
    return network_from_payload(json.loads(Path(path).read_text()))


def write_network_dot(
    net: InteractionNetwork, prov: dict, path, grid: SensorGrid | None = None
) -> None:
    """Graphviz rendering data; node positions from the grid when available."""
    lines = [f"// {k}={v}" for k, v in sorted(prov.items())]
    lines.append("digraph interactions {")
    for idx, name in zip(net.nodes, net.node_names):
        attrs = [f'label="{name}"']
        if grid is not None:
            sensor = ChannelId.from_name(name).sensor_index
            if sensor in grid.positions:
                r, c = grid.positions[sensor]
                x_m = c * grid.lateral_spacing_m
                y_m = -r * grid.longitudinal_spacing_m
                attrs.append(f'pos="{x_m:.2f},{y_m:.2f}!"')
        lines.append(f"  n{idx} [{', '.join(attrs)}];")
    for e in net.edges:
        lines.append(f'  n{e.source} -> n{e.target} [weight={e.weight:.6g}, label="{e.weight:.4f}"];')
    lines.append("}")
    Path(path).write_text("\n".join(lines) + "\n")


def write_mi_map_csv(mi_map: PairwiseMIMap, prov: dict, path) -> None:
    """Edges with raw and reporting-clamped MI plus Monte Carlo standard error."""
    lines = _csv_provenance_lines(prov)
    lines.append(f"# axis={mi_map.axis.value}")
    lines.append(f"# scenario={mi_map.scenario}")
    lines.append("sensor_a,sensor_b,mi,mi_raw,mi_stderr")
    for (a, b), value, stderr in zip(mi_map.edges, mi_map.values, mi_map.stderrs):
        clamped = value if value > 0 else 0.0
        lines.append(f"{a},{b},{clamped!r},{value!r},{stderr!r}")
    Path(path).write_text("\n".join(lines) + "\n")


def read_mi_map_csv(path) -> PairwiseMIMap:
    path = Path(path)
    axis = None
    scenario = ""
    edges, values, stderrs = [], [], []
    header_seen = False
    for line_no, raw in enumerate(path.read_text().splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            if body.startswith("axis="):
                axis = Axis(body.split("=", 1)[1])
            elif body.startswith("scenario="):
                scenario = body.split("=", 1)[1]
            continue
        if not header_seen:
            if line != "sensor_a,sensor_b,mi,mi_raw,mi_stderr":
                raise ParseError(line_no, 1, "unexpected MI map header")
            header_seen = True
            continue
        cells = line.split(",")
        if len(cells) != 5:
            raise ParseError(line_no, 1, "expected 5 cells")
        edges.append((int(cells[0]), int(cells[1])))
        values.append(float(cells[3]))
        stderrs.append(float(cells[4]))
    if axis is None or not header_seen:
        raise ParseError(1, 1, "not a pairwise MI map file")
    return PairwiseMIMap(axis, scenario, tuple(edges), tuple(values), tuple(stderrs))


def write_mi_map_diff_csv(diff: MIMapDiff, prov: dict, path) -> None:
    lines = _csv_provenance_lines(prov)
    lines.append(f"# axis={diff.axis.value}")
    lines.append(f"# baseline={diff.baseline_scenario}")
    lines.append(f"# comparison={diff.comparison_scenario}")
    lines.append(f"# sign_convention={diff.sign_convention}")
    lines.append("sensor_a,sensor_b,delta_mi")
    for (a, b), delta in zip(diff.edges, diff.deltas):
        lines.append(f"{a},{b},{delta!r}")
    Path(path).write_text("\n".join(lines) + "\n")


def write_network_diff_json(diff: NetworkDiff, prov: dict, path) -> None:
    payload = {
        "provenance": prov,
        "lost": [
            {"source": e.source, "target": e.target, "weight": e.weight}
            for e in diff.lost
        ],
        "gained": [
            {"source": e.source, "target": e.target, "weight": e.weight}
            for e in diff.gained
        ],
        "retained": [
            {
                "source": e.source,
                "target": e.target,
                "weight_baseline": e.weight_baseline,
                "weight_comparison": e.weight_comparison,
                "delta": e.delta,
            }
            for e in diff.retained
        ],
    }
    write_json(payload, path)


def write_degree_distribution_csv(dist: DegreeDistribution, prov: dict, path) -> None:
    lines = _csv_provenance_lines(prov)
    lines.append("degree,in_probability,out_probability")
    max_deg = max(len(dist.in_probs), len(dist.out_probs)) - 1
    for k in range(max_deg + 1):
        p_in = dist.in_probs[k] if k < len(dist.in_probs) else 0.0
        p_out = dist.out_probs[k] if k < len(dist.out_probs) else 0.0
        lines.append(f"{k},{p_in!r},{p_out!r}")
    Path(path).write_text("\n".join(lines) + "\n")
