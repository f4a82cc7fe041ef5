"""
Catalog exporter for GroupLens.
Writes every built-in catalog group as a Cayley table document.
"""
import sys
from pathlib import Path

from dotenv import load_dotenv

from grouplens.core.catalog import build_catalog, dump_group

# Load environment variables
load_dotenv()


def export_catalog(target: Path) -> int:
    target.mkdir(parents=True, exist_ok=True)
    catalog = build_catalog()
    for spec, group in catalog.items():
        path = target / (spec.replace(":", "-").replace(",", "_") + ".json")
        path.write_text(dump_group(group).model_dump_json(indent=2) + "\n")
        print(f"Wrote {path} (order {group.order})")
    return len(catalog)


if __name__ == "__main__":
    out = Path(sys.argv[1]) if len(sys.argv) > 1 else Path("catalog")
    count = export_catalog(out)
    print(f"Exported {count} groups to {out}")
