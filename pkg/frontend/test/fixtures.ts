export const SWEEP_CSV = `# sweep: frame=64x14 cp=6 scenario=eva-scaled seed=7
snr_db,estimator,equalizer,trials,bits,bit_errors,ber,frames,frame_errors,fer,mean_nmse_db,mean_paths,seed
0,proposed,wiener,50,89600,21504,0.24,50,50,1.0,-12.5,6.2,7
10,proposed,wiener,50,89600,13440,0.15,50,50,1.0,-22.1,8.9,7
20,proposed,wiener,50,89600,2330,0.026,50,49,0.98,-23.9,9.0,7
30,proposed,wiener,50,89600,717,0.008,50,42,0.84,-24.2,9.0,7
0,pn,wiener,50,89600,23296,0.26,50,50,1.0,-10.1,5.8,7
10,pn,wiener,50,89600,14515,0.162,50,50,1.0,-18.4,8.1,7
20,pn,wiener,50,89600,4838,0.054,50,50,1.0,-19.9,8.4,7
30,pn,wiener,50,89600,3942,0.044,50,50,1.0,-20.0,8.4,7
`;

export const SWEEP_CSV_IDEAL = `snr_db,estimator,equalizer,trials,bits,bit_errors,ber,frames,frame_errors,fer,mean_nmse_db,mean_paths,seed
10,ideal,mmse,50,89600,1434,0.016,50,48,0.96,-250.0,9.0,7
20,ideal,mmse,50,89600,224,0.0025,50,30,0.6,-250.0,9.0,7
30,ideal,mmse,50,89600,54,0.0006,50,12,0.24,-250.0,9.0,7
`;

export const BENCH_CSV = `# bench: N=14 cp ratio=0.09 reps=5
method,M,N,median_seconds,reps
proposed_ce,64,14,0.012,5
proposed_ce,128,14,0.025,5
proposed_ce,256,14,0.054,5
mmse_eq,64,14,0.031,5
mmse_eq,128,14,0.26,5
mmse_eq,256,14,2.1,5
`;

export const SINGLE_ROW_SWEEP = `snr_db,estimator,equalizer,trials,bits,bit_errors,ber,frames,frame_errors,fer,mean_nmse_db,mean_paths,seed
20,ideal,wiener,10,17920,18,0.001,10,5,0.5,-250.0,9.0,3
`;
