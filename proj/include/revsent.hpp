#pragma once

#include "revsent/balance.hpp"
#include "revsent/config.hpp"
#include "revsent/corpus.hpp"
#include "revsent/csv.hpp"
#include "revsent/error.hpp"
#include "revsent/eval.hpp"
#include "revsent/extract.hpp"
#include "revsent/html.hpp"
#include "revsent/logistic.hpp"
#include "revsent/model_io.hpp"
#include "revsent/pipeline.hpp"
#include "revsent/porter.hpp"
#include "revsent/random.hpp"
#include "revsent/report.hpp"
#include "revsent/sparse.hpp"
#include "revsent/svm.hpp"
#include "revsent/text.hpp"
#include "revsent/vectorize.hpp"
