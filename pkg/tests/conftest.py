import pytest


def write_corpus_dir(root, articles):
    """Write {id: text} as <root>/<id>.txt and return root."""
    root.mkdir(parents=True, exist_ok=True)
    for article_id, text in articles.items():
        (root / f"{article_id}.txt").write_text(text, encoding="utf-8")
    return root


@pytest.fixture
def corpus_dir(tmp_path):
    def _make(articles, name="corpus"):
        return write_corpus_dir(tmp_path / name, articles)

    return _make
