"""Result files: CSV tables, JSON summaries, plot data and figure analogues."""

from . import config
from .emit import emit_results, results_frame, write_csv, write_json, write_plot_data, write_svg
from .plotting import render_figure
