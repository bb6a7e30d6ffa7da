"""Functions related to the creation of a graph based on predefined nodes and
edges."""

from langgraph.graph import END, StateGraph

from .node import (GraphState, assemble_report, compute_spectra,
                   judge_spectra, load_potential_file, locate_darboux_points,
                   should_compute_spectra)


def build_check_graph():
    """Builds the workflow graph of the ``check`` command.

    Returns:
        The compiled workflow graph.
    """
    workflow = StateGraph(GraphState)
    workflow.add_node("load_potential_file", load_potential_file)
    workflow.add_node("locate_darboux_points", locate_darboux_points)
    workflow.add_node("compute_spectra", compute_spectra)
    workflow.add_node("judge_spectra", judge_spectra)
    workflow.add_node("assemble_report", assemble_report)

    workflow.set_entry_point("load_potential_file")
    workflow.add_edge("load_potential_file", "locate_darboux_points")
    workflow.add_conditional_edges(
        "locate_darboux_points",
        should_compute_spectra,
        {
            "compute_spectra": "compute_spectra",
            "judge": "judge_spectra",
        },
    )
    workflow.add_edge("compute_spectra", "judge_spectra")
    workflow.add_edge("judge_spectra", "assemble_report")
    workflow.add_edge("assemble_report", END)

    return workflow.compile()
