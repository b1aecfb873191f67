"""CSV-backed storage for solved root sets."""

import csv
import json
from pathlib import Path
from typing import Dict, List, Optional, Tuple

import numpy as np

from lattice.models import BetheRootSet, ChainSpec, Inhomogeneities, RgScheme

COLUMNS = ["index", "re_zeta", "im_zeta", "ray", "ray_index"]


def write_header(f, meta: Dict[str, str]) -> None:
    for key, value in meta.items():
        f.write(f"# {key} = {value}\n")


def read_header(lines: List[str]) -> Tuple[Dict[str, str], List[str]]:
    """Split `# key = value` lines from the CSV body."""
    meta, body = {}, []
    for line in lines:
        if line.startswith("#"):
            key, _, value = line[1:].partition("=")
            meta[key.strip()] = value.strip()
        elif line.strip():
            body.append(line)
    return meta, body


class RootStore:
    """
    Directory of root-set CSV files, one per key.

    Each file carries the chain, scheme and inhomogeneities in its header
    block. Writes replace the whole file.
    """

    def __init__(self, db_path):
        self.db_path = Path(db_path)
        self._files: Dict[str, Path] = {}
        self._load()

    def _load(self) -> None:
        if not self.db_path.exists():
            return
        for path in sorted(self.db_path.glob("*.csv")):
            self._files[path.stem] = path

    def _save(self, key: str, meta: Dict[str, str], root_set: BetheRootSet) -> Path:
        self.db_path.mkdir(parents=True, exist_ok=True)
        path = self.db_path / f"{key}.csv"
        ray = root_set.ray if root_set.ray is not None else np.zeros(len(root_set), dtype=int)
        ray_index = root_set.ray_index if root_set.ray_index is not None else np.zeros(len(root_set), dtype=int)
        with open(path, "w", encoding="utf-8", newline="") as f:
            write_header(f, meta)
            writer = csv.writer(f)
            writer.writerow(COLUMNS)
            for i, z in enumerate(root_set.roots):
                writer.writerow([i, f"{z.real:.17g}", f"{z.imag:.17g}", int(ray[i]), int(ray_index[i])])
        self._files[key] = path
        return path

    def save(self, key: str, chain: ChainSpec, root_set: BetheRootSet,
             eta: Optional[Inhomogeneities] = None, scheme: Optional[RgScheme] = None) -> Path:
        """Write (or overwrite) the root set under `key`."""
        meta = {
            "chain": json.dumps(chain.to_dict()),
            "scheme": json.dumps(scheme.to_dict() if scheme else None),
            "eta": json.dumps(eta.to_dict() if eta else None),
            "residual": f"{root_set.residual:.6e}",
            "flags": json.dumps(list(root_set.flags)),
        }
        return self._save(key, meta, root_set)

    def load(self, key: str) -> Tuple[ChainSpec, BetheRootSet, Optional[Inhomogeneities], Optional[RgScheme]]:
        path = self._files.get(key)
        if path is None or not path.exists():
            raise KeyError(f"Root set not found: {key}")
        with open(path, "r", encoding="utf-8") as f:
            meta, body = read_header(f.readlines())
        rows = list(csv.DictReader(body))
        roots = np.array([complex(float(r["re_zeta"]), float(r["im_zeta"])) for r in rows])
        ray = np.array([int(r["ray"]) for r in rows], dtype=int)
        ray_index = np.array([int(r["ray_index"]) for r in rows], dtype=int)
        labelled = bool(len(ray)) and ray.min() > 0
        root_set = BetheRootSet(
            roots=roots,
            ray=ray if labelled else None,
            ray_index=ray_index if labelled else None,
            flags=json.loads(meta.get("flags", "[]")),
            residual=float(meta.get("residual", "nan")),
        )
        chain = ChainSpec.from_dict(json.loads(meta["chain"]))
        scheme_data = json.loads(meta.get("scheme", "null"))
        eta_data = json.loads(meta.get("eta", "null"))
        scheme = RgScheme.from_dict(scheme_data) if scheme_data else None
        eta = Inhomogeneities.from_dict(eta_data) if eta_data else None
        return chain, root_set, eta, scheme

    def keys(self) -> List[str]:
        return sorted(self._files)

    def __contains__(self, key: str) -> bool:
        return key in self._files
