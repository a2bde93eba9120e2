"""From raw articles to a prediction.

Loads the bundled 40-article corpus, fits three views on the training
rows (counts, TF-IDF and averaged word vectors), trains a multi-view
autoencoder, fits a classifier on its joint latent and labels two new
sentences.
"""

from mvfuse import data_path
from mvfuse.classifiers import evaluate, train_classifier
from mvfuse.harness import DatasetSpec, load_dataset, prepare_experiment
from mvfuse.mvae import MvaeConfig, train_mvae
from mvfuse.textviews import ViewSpec, preprocess

print(preprocess("Visit http://a.b/c The CATS running"))

spec = DatasetSpec("fakes", str(data_path("smoke_corpus.csv")),
                   label_mapping={"0": "fake", "1": "real"})
dataset = load_dataset(spec)
views = [ViewSpec("cv"), ViewSpec("tfidf"),
         ViewSpec("w2v", path=str(data_path("smoke_embeddings.txt")))]
data, pipeline = prepare_experiment(dataset, views, ratio=0.7, seed=0)
for name, m in data.views.items():
    print(f"view {name:6s} shape {m.shape}")

mats = list(data.views.values())
ae = train_mvae([m[data.train_idx] for m in mats],
                MvaeConfig(kind="jointAAE", latent_dim=8, hidden=64, disc_hidden=32,
                           epochs=20, batch_size=16, seed=0))
z = ae.encode_joint(mats)
clf = train_classifier(z[data.train_idx], data.labels[data.train_idx], "logreg", seed=0)
m = evaluate(data.labels[data.test_idx], clf.predict(z[data.test_idx]))
print(f"test accuracy {m.accuracy:.3f}, macro F1 {m.f1_macro:.3f}")

new = ["SHOCKING: secret footage proves the army staged the attack!!!",
       "Officials confirmed the convoy reached the hospital on Tuesday."]
labels = clf.predict(ae.encode_joint(pipeline.transform(new)))
for text, label in zip(new, labels):
    print(f"{dataset.label_names[label]:5s} <- {text}")
