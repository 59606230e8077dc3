// SPDX-License-Identifier: Apache-2.0

pub mod verilog;
pub mod sva;
pub mod trace;
pub mod sim;
pub mod orchestrator;
pub mod compare;
pub mod report;
pub mod cli;
