#ifdef CONFIG_A
int a;
#ifdef CONFIG_B
int ab;
#endif
#endif
