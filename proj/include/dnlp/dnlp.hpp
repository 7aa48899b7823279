#pragma once

#include "dnlp/bench.hpp"
#include "dnlp/console.hpp"
#include "dnlp/corpus_store.hpp"
#include "dnlp/engine.hpp"
#include "dnlp/error.hpp"
#include "dnlp/simplifier.hpp"
#include "dnlp/utf8.hpp"
