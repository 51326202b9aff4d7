"""
후보 매듭 카탈로그 모듈
data/candidate_knots.json에서 이름 붙은 가상 매듭(Conway 표기 또는 Gauss 코드)을 로드
"""
import json
from functools import lru_cache
from pathlib import Path
from typing import Dict, List

from modules.errors import FamilyError

CATALOG_FILE = Path(__file__).parent.parent / "data" / "candidate_knots.json"


@lru_cache(maxsize=1)
def load_catalog() -> Dict[str, Dict[str, str]]:
    """이름 → 항목 사전 (항목은 'conway' 또는 'gauss' 키를 가짐)"""
    try:
        with open(CATALOG_FILE, 'r', encoding='utf-8') as f:
            data = json.load(f)
    except FileNotFoundError as e:
        raise FileNotFoundError(f"카탈로그 파일을 찾을 수 없습니다: {e}")
    except json.JSONDecodeError as e:
        raise ValueError(f"카탈로그 JSON 파일 형식이 잘못되었습니다: {e}")

    return {entry['name']: entry for entry in data.get('knots', [])}


def catalog_names() -> List[str]:
    return list(load_catalog())


def catalog_entry(name: str) -> Dict[str, str]:
    catalog = load_catalog()
    if name not in catalog:
        raise FamilyError(f"카탈로그에 없는 매듭: {name} (가능: {', '.join(catalog)})")
    return catalog[name]
