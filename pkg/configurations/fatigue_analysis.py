from src.analysis_configuration_spec import *

ANALYSIS_CONFIGURATION = AnalysisConfiguration(
    analysis_name="fatigue-comparison",
    description="Model comparison on the 6061-T6 aluminium fatigue lives at 31,000 psi",
    dataset=DatasetConfiguration(
        name="fatigue",
        path="data/birnbaum_saunders_fatigue_31000psi.txt",
        description="Birnbaum and Saunders (1969), n = 101"
    ),
    families=["ewl", "cwl", "gel", "ew", "ge", "weibull"],
    fit_method=FitMethods.EM_THEN_DIRECT,
    lr_pairs=[
        ("cwl", "ewl"),
        ("ew", "ewl"),
        ("ge", "ewl"),
        ("weibull", "ewl")
    ],
    workers=3
)
