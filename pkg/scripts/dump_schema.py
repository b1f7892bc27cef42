"""Write the presentation JSON schema to docs/presentation.schema.json."""
import json
from pathlib import Path

from dgha.presentation import SCHEMA

out = Path(__file__).resolve().parent.parent / "docs" / "presentation.schema.json"
out.parent.mkdir(exist_ok=True)
out.write_text(json.dumps(SCHEMA, indent=2, ensure_ascii=False) + "\n", encoding="utf-8")
print(out)
