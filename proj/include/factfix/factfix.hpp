// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "factfix/baseline_corrector.hpp"
#include "factfix/config.hpp"
#include "factfix/corpus.hpp"
#include "factfix/corpus_json.hpp"
#include "factfix/corruptor.hpp"
#include "factfix/error.hpp"
#include "factfix/evaluator.hpp"
#include "factfix/external.hpp"
#include "factfix/jsonl.hpp"
#include "factfix/pronouns.hpp"
#include "factfix/rng.hpp"
#include "factfix/text.hpp"
#include "factfix/utf8.hpp"
