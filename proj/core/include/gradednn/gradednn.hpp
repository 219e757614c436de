#pragma once

#include "gradednn/approx_bench.hpp"
#include "gradednn/classical_mlp.hpp"
#include "gradednn/dataset.hpp"
#include "gradednn/errors.hpp"
#include "gradednn/experiment.hpp"
#include "gradednn/grad_suite.hpp"
#include "gradednn/graded_core.hpp"
#include "gradednn/graded_grad.hpp"
#include "gradednn/graded_loss.hpp"
#include "gradednn/graded_nn.hpp"
#include "gradednn/graded_opt.hpp"
#include "gradednn/network_io.hpp"
#include "gradednn/rational.hpp"
#include "gradednn/verify_examples.hpp"
