from src.analysis_configuration_spec import *

ANALYSIS_CONFIGURATION = AnalysisConfiguration(
    analysis_name="carbon-fibre-comparison",
    description="Model comparison on the tensile strengths of 10 mm carbon fibres",
    dataset=DatasetConfiguration(
        name="carbon-fibre",
        path="data/badar_priest_carbon_fibre_10mm.txt",
        description="Badar and Priest (1982), n = 63"
    ),
    families=["ewl", "cwl", "gel", "ew", "ge", "weibull"],
    fit_method=FitMethods.EM_THEN_DIRECT,
    # The default grid plus a low-θ start, where the EW-like optimum of this sample sits.
    starting_points=StartingPoints(thetas=(0.01, 0.1, 0.5, 0.9)),
    lr_pairs=[
        ("ew", "ewl"),
        ("ge", "ewl"),
        ("weibull", "ewl")
    ],
    workers=3
)
