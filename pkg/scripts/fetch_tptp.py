# scripts/fetch_tptp.py
"""
TPTP 라이브러리 내려받기 (전체 TH0 코퍼스 돌릴 때만 필요).

    python scripts/fetch_tptp.py --version 8.2.0 --dest ./TPTP
    PROVER_TPTP_ROOT=./TPTP/TPTP-v8.2.0 python manage.py bench ./TPTP/TPTP-v8.2.0/Problems/SEV/SEV241^5.p

번들 문제(prover/problems)는 이 스크립트 없이도 돈다.
"""
from __future__ import annotations

import argparse
import sys
import tarfile
from pathlib import Path

import requests

BASE_URL = "https://www.tptp.org/TPTP/Distribution"


def fetch(version: str, dest: Path, timeout: int = 60) -> Path:
    dest.mkdir(parents=True, exist_ok=True)
    name = f"TPTP-v{version}.tgz"
    archive = dest / name
    if not archive.exists():
        url = f"{BASE_URL}/{name}"
        print(f"다운로드: {url}")
        with requests.get(url, stream=True, timeout=timeout) as r:
            r.raise_for_status()
            with open(archive, "wb") as f:
                for chunk in r.iter_content(chunk_size=1 << 20):
                    f.write(chunk)
    root = dest / f"TPTP-v{version}"
    if not root.exists():
        print(f"압축 해제: {archive}")
        with tarfile.open(archive, "r:gz") as tf:
            tf.extractall(dest, filter="data")
    return root


def main() -> int:
    ap = argparse.ArgumentParser(description="TPTP 배포본 다운로드/해제")
    ap.add_argument("--version", default="8.2.0")
    ap.add_argument("--dest", default="TPTP")
    args = ap.parse_args()
    try:
        root = fetch(args.version, Path(args.dest))
    except requests.RequestException as e:
        print(f"[!] 다운로드 실패: {e}", file=sys.stderr)
        return 1
    print(f"PROVER_TPTP_ROOT={root.resolve()}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
