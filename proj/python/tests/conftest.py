"""Makes the package and the compiled module importable from the build tree.

SDGCD_PACKAGE_DIR points at the directory holding the sdgcd package sources,
SDGCD_MODULE_DIR at the directory holding the compiled _core module.  Both are
set by the ctest registration; an installed wheel needs neither.
"""

import os
import sys

for variable in ("SDGCD_MODULE_DIR", "SDGCD_PACKAGE_DIR"):
    path = os.environ.get(variable)
    if path and path not in sys.path:
        sys.path.insert(0, path)
