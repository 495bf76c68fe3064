from collections import Counter

from core_data_modules.logging import Logger

log = Logger(__name__)


class RunStats:
    """
    Tallies of the notable events of one analysis run, such as fits that ended on the θ boundary or series that fell
    back to quadrature, logged as a summary once the run is done.

    Subclasses set EVENT_DESCRIPTIONS: the events they report, in reporting order, each mapped to its log label.
    Events outside that table are still counted, but left out of the summary.
    """
    EVENT_DESCRIPTIONS = {}

    def __init__(self):
        self.event_counts = Counter({event: 0 for event in self.EVENT_DESCRIPTIONS})

    def add_event(self, event):
        self.event_counts[event] += 1

    def add_stats(self, stats):
        """Folds in the tallies of another run, e.g. one model fitted in a worker process."""
        self.event_counts.update(stats.event_counts)

    def print_summary(self):
        for event, description in self.EVENT_DESCRIPTIONS.items():
            log.info(f"{description}: {self.event_counts[event]}")
