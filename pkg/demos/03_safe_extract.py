"""Show the archive hardening: a zip whose member name climbs out of
the extraction directory is refused outright in strict mode and skipped
member-by-member in lenient mode. Symlink members never materialize.

Run from the repository root:   python3 demos/03_safe_extract.py
"""

import pathlib
import tempfile

from subguard import TraversalRefused, list_zip, safe_extract

ROOT = pathlib.Path(__file__).resolve().parent.parent
TRAVERSAL = ROOT / "corpus" / "malicious" / "08_traversal.zip"
SYMLINK = ROOT / "corpus" / "zips" / "symlink_entry.zip"


def show_listing(path: pathlib.Path) -> None:
    print(f"== {path.name} ==")
    for entry in list_zip(path.read_bytes()):
        flags = []
        if entry.escapes:
            flags.append("ESCAPES")
        if entry.is_symlink:
            flags.append("SYMLINK")
        print(f"  {entry.uncompressed_size:6} bytes  {' '.join(flags) or 'ok':10} {entry.name}")
        if entry.name != entry.normalized:
            print(f"          normalizes to: {entry.normalized!r}")


def main() -> None:
    show_listing(TRAVERSAL)

    data = TRAVERSAL.read_bytes()
    with tempfile.TemporaryDirectory() as tmp:
        dest = pathlib.Path(tmp) / "strict"
        print("\nstrict extraction:")
        try:
            safe_extract(data, str(dest), strict=True)
        except TraversalRefused as exc:
            print(f"  refused before writing anything: {exc}")
        print(f"  files on disk afterwards: {sorted(dest.rglob('*')) if dest.exists() else []}")

        dest = pathlib.Path(tmp) / "lenient"
        print("\nlenient extraction:")
        result = safe_extract(data, str(dest), strict=False)
        for written in result.written:
            print(f"  wrote   {written}")
        for skipped in result.skipped:
            print(f"  skipped {skipped.name}: {skipped.reason}")

    print()
    show_listing(SYMLINK)
    with tempfile.TemporaryDirectory() as tmp:
        result = safe_extract(SYMLINK.read_bytes(), tmp)
        print("extraction:")
        for written in result.written:
            print(f"  wrote   {written}")
        for skipped in result.skipped:
            print(f"  skipped {skipped.name}: {skipped.reason}")


if __name__ == "__main__":
    main()
