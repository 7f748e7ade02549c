import sys
import time
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from moufang.search import TABLE_ORDERS, search_orders

STAGE1_ORDERS = [o for o in TABLE_ORDERS if o <= 32]
STAGE2_ORDERS = [o for o in TABLE_ORDERS if o > 32]


@pytest.fixture(scope="session")
def full_catalog():
    """One classification run shared by the whole session.

    Returns (catalog, stage1 seconds, stage2 seconds): stage 1 covers the
    orders up to 32, stage 2 the remaining table orders through 60.
    """
    t0 = time.time()
    catalog = search_orders(STAGE1_ORDERS)
    t1 = time.time()
    search_orders(STAGE2_ORDERS, catalog=catalog)
    t2 = time.time()
    return catalog, t1 - t0, t2 - t1
