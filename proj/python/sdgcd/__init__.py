"""Python veneer over the staggered DG convection-diffusion solver."""

try:
    from ._core import (
        dof_counts,
        dof_table_csv,
        mesh_counts,
        observed_order,
        solve_experiment,
    )
except ImportError:  # running from the source tree: the module sits on sys.path
    from _core import (
        dof_counts,
        dof_table_csv,
        mesh_counts,
        observed_order,
        solve_experiment,
    )

__all__ = [
    "dof_counts",
    "dof_table_csv",
    "mesh_counts",
    "observed_order",
    "solve_experiment",
]
