//! Skip-gram negative-sampling training, vector storage and persistence.

mod io;
mod sampler;
mod sgns;
mod space;
mod train;
mod vocab;

pub use io::{
    load_binary, load_vectors, read_binary, read_text, save_binary, save_vectors, write_binary,
    write_text,
};
pub use sampler::NegativeSampler;
pub use sgns::{sgns_loss_and_grad, sigmoid, SgnsGradient};
pub use space::{cosine, cosine_similarity, EmbeddingSpace, SpaceMetadata};
pub use train::{keep_probability, train_sgns, train_sgns_with_stats, TrainConfig, TrainStats};
pub use vocab::{build_vocabulary, Vocabulary};
