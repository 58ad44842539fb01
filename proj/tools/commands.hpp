#pragma once

#include "run_config.hpp"

namespace persona::cli {

// Each returns a process exit code: 0 ok, 1 data/validation error.
int cmd_validate(const RunConfig& cfg);
int cmd_generate(const RunConfig& cfg);
int cmd_benchmark(const RunConfig& cfg);
int cmd_train(const RunConfig& cfg);
int cmd_predict(const RunConfig& cfg);
int cmd_embed_train(const RunConfig& cfg);
int cmd_sentiment_train(const RunConfig& cfg);
int cmd_report(const RunConfig& cfg);

}  // namespace persona::cli
