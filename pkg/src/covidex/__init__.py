"""covidex: corpus search and analytics engine.

Library layers:

* :mod:`covidex.ingest`   -- parse external inputs into canonical records
* :mod:`covidex.index`    -- inverted index + BM25 keyword search
* :mod:`covidex.entities` -- gazetteer tagging and bio-entity statistics
* :mod:`covidex.tweets`   -- India-filtered tweet analytics and LQMS reports
* :mod:`covidex.topics`   -- LDA topic model (collapsed Gibbs sampler)
* :mod:`covidex.stats`    -- infection counter series
* :mod:`covidex.service`  -- JSON HTTP API over published snapshots
"""

__version__ = "0.1.0"
