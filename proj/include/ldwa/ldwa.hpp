#pragma once

#include "ldwa/checkpoint.hpp"
#include "ldwa/commands.hpp"
#include "ldwa/config.hpp"
#include "ldwa/data.hpp"
#include "ldwa/error.hpp"
#include "ldwa/eval.hpp"
#include "ldwa/model.hpp"
#include "ldwa/nn/attention.hpp"
#include "ldwa/nn/conv1d.hpp"
#include "ldwa/nn/dense.hpp"
#include "ldwa/nn/gradcheck.hpp"
#include "ldwa/nn/loss.hpp"
#include "ldwa/nn/lstm.hpp"
#include "ldwa/nn/optimizer.hpp"
#include "ldwa/train.hpp"
