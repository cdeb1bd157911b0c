import argparse
import shutil
import subprocess
import time
from pathlib import Path

parser = argparse.ArgumentParser()
parser.add_argument(
    "--live",
    action="store_true",
    help="Pause between sections and wait for Enter.",
)
parser.add_argument(
    "--grid",
    default="smoke",
    help="Grid preset or JSON grid file for the run section (default: smoke).",
)
args = parser.parse_args()

OUT_DIR = "demo-results"
BARS_CSV = "demo-bars.csv"
TYPE_DELAY = 0.04
LIVE_MODE = args.live


def type_text(text, delay=TYPE_DELAY):
    for ch in text:
        print(ch, end="", flush=True)
        time.sleep(delay)
    print()


def display_command(args):
    return " ".join(f'"{arg}"' if " " in arg else arg for arg in args)


def run_command(args):
    type_text(f"$ {display_command(args)}")
    time.sleep(0.4)
    subprocess.run(args, check=True)


def pause_between_sections(pause_seconds, next_title=None):
    if LIVE_MODE:
        message = "Press Enter to continue"
        if next_title:
            message += f" -> {next_title}"
        input(message + "...")
        print()
    else:
        print()
        time.sleep(pause_seconds)


out_dir = Path(OUT_DIR)
if out_dir.exists():
    shutil.rmtree(out_dir)

sections = [
    {
        "title": "Write a synthetic OHLC series",
        "commands": [
            ["directionlab", "synth", "--out-file", BARS_CSV, "--bars", "520", "--seed", "2020"],
        ],
        "pause": 1.0,
    },
    {
        "title": "Indicators and trend signs",
        "commands": [
            ["directionlab", "features", "--input", BARS_CSV, "--mode", "both", "--out", OUT_DIR],
        ],
        "pause": 3.0,
    },
    {
        "title": "Grid search, comparison and validation",
        "commands": [
            ["directionlab", "--verbose", "run", "--input", BARS_CSV, "--validation", "synthetic",
             "--grid", args.grid, "--out", OUT_DIR],
        ],
        "pause": 5.0,
    },
    {
        "title": "Independent t-tests on the saved models",
        "commands": [
            ["directionlab", "validate", "--validation", "synthetic", "--mode", "discrete",
             "--independent", "--out", OUT_DIR],
        ],
        "pause": 4.0,
    },
    {
        "title": "Re-render the report",
        "commands": [
            ["directionlab", "report", "--out", OUT_DIR, "--seed", "0"],
        ],
        "pause": 2.0,
    },
]

for i, section in enumerate(sections):
    print(f"---------- {section['title'].upper()} ----------")
    time.sleep(0.5)

    for command in section["commands"]:
        run_command(command)

    next_title = sections[i + 1]["title"] if i < len(sections) - 1 else None
    pause_between_sections(section["pause"], next_title)
