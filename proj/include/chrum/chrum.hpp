#pragma once

// Umbrella header for the Chrum pipeline: template parsing, macro expansion,
// workflow emission, experiment planning and submission.

#include "chrum/clock.hpp"
#include "chrum/config.hpp"
#include "chrum/emitter.hpp"
#include "chrum/errors.hpp"
#include "chrum/expand.hpp"
#include "chrum/experiment.hpp"
#include "chrum/idioms.hpp"
#include "chrum/properties.hpp"
#include "chrum/replace_table.hpp"
#include "chrum/storage.hpp"
#include "chrum/strings.hpp"
#include "chrum/submit.hpp"
#include "chrum/template_parser.hpp"
#include "chrum/workflow_graph.hpp"
#include "chrum/xml.hpp"
