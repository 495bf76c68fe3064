from src.cli.configuration import AnalysisConfiguration, DatasetConfiguration
from src.inference.configuration import DirectConfig, EmConfig, StartingPoints
from src.inference.fit_result import FitMethods
