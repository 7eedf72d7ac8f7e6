#!/usr/bin/env python3
"""Regenerate src/unicode_data.inc from Python's unicodedata module.

The generated file carries three tables used by src/unicode.cpp:
  - full canonical (NFD) decompositions, Hangul excluded (it is algorithmic),
  - canonical combining classes (nonzero entries only),
  - codepoint ranges with general category Mn (nonspacing marks).

Run from the repository root:  python3 scripts/gen_unicode_data.py
"""

import sys
import unicodedata

MAX_CP = 0x110000
HANGUL_BASE, HANGUL_END = 0xAC00, 0xD7A3


def main() -> int:
    decomp = {}
    for cp in range(MAX_CP):
        if HANGUL_BASE <= cp <= HANGUL_END or 0xD800 <= cp <= 0xDFFF:
            continue
        ch = chr(cp)
        raw = unicodedata.decomposition(ch)
        if raw and not raw.startswith("<"):
            # NFD of a single character yields the fully expanded,
            # canonically ordered decomposition.
            decomp[cp] = [ord(c) for c in unicodedata.normalize("NFD", ch)]

    ccc = {}
    for cp in range(MAX_CP):
        if 0xD800 <= cp <= 0xDFFF:
            continue
        klass = unicodedata.combining(chr(cp))
        if klass:
            ccc[cp] = klass

    mn_ranges = []
    run_start = None
    for cp in range(MAX_CP + 1):
        is_mn = cp < MAX_CP and not (0xD800 <= cp <= 0xDFFF) and \
            unicodedata.category(chr(cp)) == "Mn"
        if is_mn and run_start is None:
            run_start = cp
        elif not is_mn and run_start is not None:
            mn_ranges.append((run_start, cp - 1))
            run_start = None

    pool = []
    entries = []
    for cp in sorted(decomp):
        seq = decomp[cp]
        entries.append((cp, len(pool), len(seq)))
        pool.extend(seq)
    if len(pool) >= 1 << 16:
        print("decomposition pool exceeds uint16 offsets", file=sys.stderr)
        return 1

    out = []
    out.append("// Generated by scripts/gen_unicode_data.py"
               f" (Unicode {unicodedata.unidata_version}). Do not edit.")
    out.append("")
    out.append("struct DecompEntry {")
    out.append("  char32_t cp;")
    out.append("  std::uint16_t offset;")
    out.append("  std::uint8_t length;")
    out.append("};")
    out.append("")
    out.append("struct CombiningClassEntry {")
    out.append("  char32_t cp;")
    out.append("  std::uint8_t ccc;")
    out.append("};")
    out.append("")
    out.append("struct CodepointRange {")
    out.append("  char32_t first;")
    out.append("  char32_t last;")
    out.append("};")
    out.append("")

    out.append(f"inline constexpr DecompEntry kDecompEntries[{len(entries)}] = {{")
    for row in chunked([f"{{0x{cp:04X},{off},{ln}}}" for cp, off, ln in entries], 6):
        out.append("    " + ",".join(row) + ",")
    out.append("};")
    out.append("")

    out.append(f"inline constexpr char32_t kDecompPool[{len(pool)}] = {{")
    for row in chunked([f"0x{cp:04X}" for cp in pool], 10):
        out.append("    " + ",".join(row) + ",")
    out.append("};")
    out.append("")

    out.append(f"inline constexpr CombiningClassEntry kCombiningClasses[{len(ccc)}] = {{")
    for row in chunked([f"{{0x{cp:04X},{k}}}" for cp, k in sorted(ccc.items())], 8):
        out.append("    " + ",".join(row) + ",")
    out.append("};")
    out.append("")

    out.append(f"inline constexpr CodepointRange kMnRanges[{len(mn_ranges)}] = {{")
    for row in chunked([f"{{0x{a:04X},0x{b:04X}}}" for a, b in mn_ranges], 6):
        out.append("    " + ",".join(row) + ",")
    out.append("};")
    out.append("")

    with open("src/unicode_data.inc", "w", encoding="utf-8") as fh:
        fh.write("\n".join(out))
    print(f"wrote src/unicode_data.inc: {len(entries)} decompositions, "
          f"{len(pool)} pool codepoints, {len(ccc)} combining classes, "
          f"{len(mn_ranges)} Mn ranges")
    return 0


def chunked(items, n):
    for i in range(0, len(items), n):
        yield items[i:i + n]


if __name__ == "__main__":
    sys.exit(main())
