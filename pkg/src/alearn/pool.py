"""Labelled / unlabelled bookkeeping for pool-based active learning."""
import numpy as np

from .errors import BudgetError, DoubleLabelError, LabelIndexError


class ActivePool:
    """A dataset split into a labelled part and an unlabelled pool.

    The dataset's labels play the oracle: they stay hidden until an index is
    labelled. Mutating methods must not run concurrently.
    """

    def __init__(self, dataset):
        self.dataset = dataset
        self.labelled_mask = np.zeros(len(dataset), dtype=bool)

    def __len__(self):
        return len(self.dataset)

    @property
    def n_labelled(self):
        return int(self.labelled_mask.sum())

    @property
    def n_unlabelled(self):
        return len(self) - self.n_labelled

    def labelled_indices(self):
        return np.flatnonzero(self.labelled_mask)

    def pool_indices(self):
        """Ascending indices of every unlabelled item."""
        return np.flatnonzero(~self.labelled_mask)

    def revealed_labels(self):
        """Labels of the labelled items, in ``labelled_indices`` order."""
        return self.dataset.labels[self.labelled_mask]

    def labelled_data(self):
        mask = self.labelled_mask
        return self.dataset.features[mask], self.dataset.labels[mask]

    def reveal_labels(self, indices):
        indices = np.asarray(indices, dtype=np.int64).reshape(-1)
        if indices.size == 0:
            return self
        if indices.min() < 0 or indices.max() >= len(self):
            raise LabelIndexError(f"index out of range for pool of size {len(self)}")
        if np.unique(indices).size != indices.size:
            raise DoubleLabelError("duplicate indices in a single labelling request")
        already = indices[self.labelled_mask[indices]]
        if already.size:
            raise DoubleLabelError(f"indices already labelled: {already.tolist()}")
        self.labelled_mask[indices] = True
        return self

    def initialize_random_labels(self, b, seed):
        """Label ``b`` items chosen uniformly at random without replacement."""
        if b > len(self):
            raise BudgetError(f"cannot label {b} items from a dataset of {len(self)}")
        if b < 0:
            raise BudgetError("initial budget must be non-negative")
        rng = np.random.default_rng(seed)
        return self.reveal_labels(rng.choice(len(self), size=b, replace=False))

    def subsample_pool(self, m, seed):
        """Up to ``m`` unlabelled indices drawn without replacement, ascending.

        ``m`` of ``None``, ``0`` or any negative value means no limit.
        """
        pool = self.pool_indices()
        if m is None or m <= 0 or m >= pool.size:
            return pool
        rng = np.random.default_rng(seed)
        return np.sort(rng.choice(pool, size=m, replace=False))
