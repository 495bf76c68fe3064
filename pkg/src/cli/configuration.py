from src.inference.configuration import EmConfig, StartingPoints
from src.inference.fit_result import FitMethods


class DatasetConfiguration:
    def __init__(self, name, path, column=None, description=None):
        """
        Configuration for a dataset of lifetimes to analyse.

        :param name: Name of the dataset, used in logs and output e.g. "fatigue".
        :type name: str
        :param path: Path to the dataset file: one value per line, or a CSV with a header row. Lines starting with '#'
                     are comments.
        :type path: str
        :param column: For CSV files, the header of the column holding the lifetimes.
        :type column: str | None
        :param description: Optional description of where the data comes from.
        :type description: str | None
        """
        self.name = name
        self.path = path
        self.column = column
        self.description = description


class AnalysisConfiguration:
    def __init__(self, analysis_name, dataset, families, fit_method=FitMethods.EM_THEN_DIRECT, em_config=None,
                 starting_points=None, lr_pairs=None, workers=1, description=None):
        """
        Configuration for a model-comparison analysis of one dataset.

        :param analysis_name: Name of this analysis e.g. "fatigue-comparison".
        :type analysis_name: str
        :param dataset: Dataset to analyse.
        :type dataset: DatasetConfiguration
        :param families: Tags of the families to fit and rank e.g. ["ewl", "ew", "weibull"].
        :type families: list of str
        :param fit_method: One of src.inference.fit_result.FitMethods.
        :type fit_method: str
        :param em_config: EM stopping rules. If None, uses the EmConfig defaults.
        :type em_config: src.inference.configuration.EmConfig | None
        :param starting_points: Multi-start grid. If None, uses the StartingPoints defaults.
        :type starting_points: src.inference.configuration.StartingPoints | None
        :param lr_pairs: (null tag, alternative tag) pairs to run likelihood-ratio tests for. If None, every nested
                         pair among `families` is tested.
        :type lr_pairs: list of (str, str) | None
        :param workers: Number of processes to fit families in.
        :type workers: int
        :param description: Optional description of this analysis.
        :type description: str | None
        """
        if em_config is None:
            em_config = EmConfig()
        if starting_points is None:
            starting_points = StartingPoints()

        self.analysis_name = analysis_name
        self.dataset = dataset
        self.families = families
        self.fit_method = fit_method
        self.em_config = em_config
        self.starting_points = starting_points
        self.lr_pairs = lr_pairs
        self.workers = workers
        self.description = description

        self.validate()

    def validate(self):
        assert isinstance(self.dataset, DatasetConfiguration), \
            f"dataset must be a DatasetConfiguration, but got {type(self.dataset)}"
        assert len(self.families) > 0, f"Analysis '{self.analysis_name}' has no families to fit"
        assert self.fit_method in FitMethods.ALL, f"Unknown fit method {self.fit_method}"
        assert self.workers >= 1, f"workers must be >= 1, but got {self.workers}"
        assert isinstance(self.em_config, EmConfig)
        assert isinstance(self.starting_points, StartingPoints)
