"""Generate one API reference page per public twinsieve module, plus the literate nav.

Private modules (``_exceptions``, ``_version``) are documented through the package
index, which re-exports what users need.
"""

import sys
from pathlib import Path

import mkdocs_gen_files


PACKAGE = Path("twinsieve")
SKIPPED = {"__main__", "_version"}

if not PACKAGE.is_dir():
    sys.exit(f"Package folder {PACKAGE} not found; run mkdocs from the repository root.")

nav = mkdocs_gen_files.Nav()

for path in sorted(PACKAGE.rglob("*.py")):
    if path.stem in SKIPPED:
        continue
    parts = path.with_suffix("").parts
    doc_path = path.relative_to(PACKAGE).with_suffix(".md")
    if parts[-1] == "__init__":
        parts = parts[:-1]
        doc_path = doc_path.with_name("index.md")
    full_doc_path = Path("reference", doc_path)
    nav[parts] = doc_path.as_posix()

    with mkdocs_gen_files.open(full_doc_path, "w") as fd:
        fd.write(f"::: {'.'.join(parts)}\n")
        fd.write("\thandler: python\n")
        fd.write("\toptions:\n")
        fd.write("\t\tshow_root_heading: true\n")
        fd.write("\t\tshow_source: true\n")

    mkdocs_gen_files.set_edit_path(full_doc_path, path)

with mkdocs_gen_files.open("reference/SUMMARY.txt", "w") as nav_file:
    nav_file.writelines(nav.build_literate_nav())
