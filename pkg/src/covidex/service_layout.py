"""Standard layout of stage snapshot directories inside a store."""

INDEX_DIR = "index"
ENTITIES_DIR = "entities"
TWEETS_DIR = "tweets_analytics"
TOPICS_DIR = "topics"
