#pragma once

#include "gwin/architecture.hpp"
#include "gwin/bayes_layers.hpp"
#include "gwin/checkpoint.hpp"
#include "gwin/classifier.hpp"
#include "gwin/confident.hpp"
#include "gwin/critic.hpp"
#include "gwin/dataset.hpp"
#include "gwin/errors.hpp"
#include "gwin/evaluation.hpp"
#include "gwin/flops.hpp"
#include "gwin/generator.hpp"
#include "gwin/gwin_train.hpp"
#include "gwin/pipeline.hpp"
#include "gwin/rejection.hpp"
#include "gwin/report_io.hpp"
